use approx::assert_abs_diff_eq;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::sweep::SweepOpts;
use super::*;
use crate::infomeasures::{CondChannel, JointDist, Var, VarId};
use crate::rng::stream_rng;

const H_005: f64 = 0.286_396_957_115_956_1;
const I_XY_BSS_005: f64 = 0.713_603_042_884_043_9;
const RX_BSC_011: f64 = 0.607_332_136_358_470_8;
const RY_BSC_011: f64 = 0.500_084_041_835_472;
const DELTA_BSC_011: f64 = 0.392_667_863_641_529_2;
const DELTA_MGL_005_HALF: f64 = 0.392_604_824_982_835_1;

fn bss05() -> SourcePair {
    SourcePair::binary_symmetric(0.05).unwrap()
}

fn identity_v(card: usize) -> AuxSystem1 {
    AuxSystem1::new(CondChannel::identity(VarId::new(Var::Y, card), Var::V).unwrap()).unwrap()
}

fn constant_v(y_card: usize) -> AuxSystem1 {
    AuxSystem1::new(
        CondChannel::constant(vec![VarId::new(Var::Y, y_card)], VarId::new(Var::V, 1), 0).unwrap(),
    )
    .unwrap()
}

fn constant_u(x_card: usize, v_card: usize) -> CondChannel {
    CondChannel::constant(
        vec![VarId::new(Var::X, x_card), VarId::new(Var::V, v_card)],
        VarId::new(Var::U, 1),
        0,
    )
    .unwrap()
}

fn xor_u() -> CondChannel {
    CondChannel::deterministic(
        vec![VarId::new(Var::X, 2), VarId::new(Var::V, 2)],
        vec![VarId::new(Var::U, 2)],
        |r| (r / 2) ^ (r % 2),
    )
    .unwrap()
}

fn rand_simplex(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= sum);
    row
}

fn rand_pair(rng: &mut ChaCha8Rng, x_card: usize, y_card: usize) -> SourcePair {
    SourcePair::new(
        JointDist::new(
            vec![VarId::new(Var::X, x_card), VarId::new(Var::Y, y_card)],
            rand_simplex(rng, x_card * y_card),
        )
        .unwrap(),
    )
    .unwrap()
}

fn rand_channel(rng: &mut ChaCha8Rng, inputs: Vec<VarId>, outputs: Vec<VarId>) -> CondChannel {
    let rows: usize = inputs.iter().map(|v| v.card).product();
    let width: usize = outputs.iter().map(|v| v.card).product();
    let mut flat = Vec::with_capacity(rows * width);
    for _ in 0..rows {
        flat.extend(rand_simplex(rng, width));
    }
    CondChannel::new(inputs, outputs, flat).unwrap()
}

#[test]
fn theorem1_constant_helper_is_useless() {
    let src = bss05();
    let p = eval_theorem1(&src, &constant_v(2)).unwrap();
    assert_abs_diff_eq!(p.rx_min, 1.0, epsilon = 1e-12);
    assert_eq!(p.ry_min, 0.0);
    assert_eq!(p.delta_cap, 0.0);
}

#[test]
fn theorem1_identity_helper_on_bss() {
    let p = eval_theorem1(&bss05(), &identity_v(2)).unwrap();
    assert_abs_diff_eq!(p.rx_min, H_005, epsilon = 1e-12);
    assert_eq!(p.ry_min, 1.0);
    assert_abs_diff_eq!(p.delta_cap, I_XY_BSS_005, epsilon = 1e-12);
}

#[test]
fn theorem1_bsc_helper_on_bss() {
    let aux = AuxSystem1::new(CondChannel::bsc(Var::Y, Var::V, 0.11).unwrap()).unwrap();
    let p = eval_theorem1(&bss05(), &aux).unwrap();
    assert_abs_diff_eq!(p.rx_min, RX_BSC_011, epsilon = 1e-12);
    assert_abs_diff_eq!(p.ry_min, RY_BSC_011, epsilon = 1e-12);
    assert_abs_diff_eq!(p.delta_cap, DELTA_BSC_011, epsilon = 1e-12);
}

#[test]
fn theorem1_complementarity_on_random_instances() {
    // rx_min + delta_cap = H(X) for every auxiliary (the two terms are
    // H(X|V) and I(X;V)).
    let mut rng = stream_rng(11, 0);
    for _ in 0..200 {
        let src = rand_pair(&mut rng, 2, 3);
        let aux = AuxSystem1::new(rand_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 3)],
            vec![VarId::new(Var::V, 4)],
        ))
        .unwrap();
        let p = eval_theorem1(&src, &aux).unwrap();
        let hx = src.joint().entropy(&[Var::X]).unwrap();
        assert_abs_diff_eq!(p.rx_min + p.delta_cap, hx, epsilon = 1e-9);
    }
}

#[test]
fn theorem2_constant_u_recovers_theorem1_equivocation() {
    let mut rng = stream_rng(12, 0);
    for _ in 0..100 {
        let src = rand_pair(&mut rng, 2, 2);
        let v = rand_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, 3)],
        );
        let ry = 0.25 + rng.gen::<f64>();
        let aux1 = AuxSystem1::new(v.clone()).unwrap();
        let t1 = eval_theorem1(&src, &aux1).unwrap();
        if ry < t1.ry_min {
            continue;
        }
        let aux2 = AuxSystem2::new(v, constant_u(2, 3)).unwrap();
        let t2 = eval_theorem2(&src, &aux2, ry).unwrap();
        assert_abs_diff_eq!(t2.delta_cap, t1.delta_cap.min(ry), epsilon = 1e-12);
    }
}

#[test]
fn theorem2_one_time_pad_reaches_perfect_secrecy() {
    // V uniform and independent of (X, Y); U = X ⊕ V.
    let src = bss05();
    let v = CondChannel::new(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V, 2)],
        vec![0.5, 0.5, 0.5, 0.5],
    )
    .unwrap();
    let aux = AuxSystem2::new(v, xor_u()).unwrap();
    let p = eval_theorem2(&src, &aux, 1.0).unwrap();
    assert_abs_diff_eq!(p.delta_cap, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(p.ry_min, 0.0, epsilon = 1e-12);
}

#[test]
fn theorem2_bsc_construction_caps_at_operating_rate() {
    // V = Y ⊕ Ber(α) at the crossover achieving I(Y;V) = 1/2, U = X ⊕ V.
    let src = bss05();
    let alpha = crate::infomeasures::inv_binary_entropy(0.5).unwrap();
    let v = CondChannel::bsc(Var::Y, Var::V, alpha).unwrap();
    let aux = AuxSystem2::new(v, xor_u()).unwrap();
    let p = eval_theorem2(&src, &aux, 0.5).unwrap();
    // I(X;V|U) = H(X) = 1, so the operating helper rate is the cap.
    assert_abs_diff_eq!(p.delta_cap, 0.5, epsilon = 1e-12);
}

#[test]
fn theorem2_rejects_infeasible_operating_rate() {
    let src = bss05();
    let aux = AuxSystem2::new(CondChannel::bsc(Var::Y, Var::V, 0.11).unwrap(), xor_u()).unwrap();
    let err = eval_theorem2(&src, &aux, 0.3).unwrap_err();
    match err {
        crate::Error::Constraint { bound, .. } => assert!(bound.contains("I(Y;V)")),
        other => panic!("expected constraint error, got {other}"),
    }
}

fn embed_as_theorem3(aux: &AuxSystem2) -> AuxSystem3 {
    // V1 := V, with V2, W, Z constant.
    let v = aux.v_channel();
    let v_card = v.outputs()[0].card;
    let y_card = v.inputs()[0].card;
    let v12 = CondChannel::new(
        vec![VarId::new(Var::Y, y_card)],
        vec![VarId::new(Var::V1, v_card), VarId::new(Var::V2, 1)],
        v.rows().to_vec(),
    )
    .unwrap();
    let u = aux.u_channel();
    let x_card = u.inputs()[0].card;
    let u_card = u.outputs()[0].card;
    let u3 = CondChannel::new(
        vec![
            VarId::new(Var::X, x_card),
            VarId::new(Var::V1, v_card),
            VarId::new(Var::V2, 1),
        ],
        vec![VarId::new(Var::U, u_card)],
        u.rows().to_vec(),
    )
    .unwrap();
    AuxSystem3::new(v12, u3).unwrap()
}

#[test]
fn theorem3_fully_degenerate_aux_gives_zero() {
    let src = SecInsSource::without_side_information(&bss05()).unwrap();
    let v12 = CondChannel::deterministic(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V1, 1), VarId::new(Var::V2, 1)],
        |_| 0,
    )
    .unwrap();
    let u = CondChannel::constant(
        vec![
            VarId::new(Var::X, 2),
            VarId::new(Var::V1, 1),
            VarId::new(Var::V2, 1),
        ],
        VarId::new(Var::U, 1),
        0,
    )
    .unwrap();
    let p = eval_theorem3(&src, &AuxSystem3::new(v12, u).unwrap(), 0.0).unwrap();
    assert_eq!(p.delta_cap, 0.0);
    assert_eq!(p.ry_min, 0.0);
    assert_eq!(p.rins_min, Some(0.0));
}

#[test]
fn theorem3_reduces_to_theorem2_with_degenerate_side_information() {
    let mut rng = stream_rng(13, 0);
    for _ in 0..100 {
        let pair = rand_pair(&mut rng, 2, 2);
        let v = rand_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, 3)],
        );
        let u = rand_channel(
            &mut rng,
            vec![VarId::new(Var::X, 2), VarId::new(Var::V, 3)],
            vec![VarId::new(Var::U, 3)],
        );
        let aux2 = AuxSystem2::new(v, u).unwrap();
        let rsec = 0.1 + rng.gen::<f64>();
        let t2 = match eval_theorem2(&pair, &aux2, rsec) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let src3 = SecInsSource::without_side_information(&pair).unwrap();
        let t3 = eval_theorem3(&src3, &embed_as_theorem3(&aux2), rsec).unwrap();
        assert!((t3.delta_cap - t2.delta_cap).abs() <= 1e-12);
        assert!((t3.rx_min - t2.rx_min).abs() <= 1e-12);
        assert!((t3.ry_min - t2.ry_min).abs() <= 1e-12);
    }
}

#[test]
fn theorem3_identical_side_information_cancels() {
    // W = Z (the same symbol at Bob and Eve), all auxiliaries constant:
    // Δ = min(rsec, 0) + I(X;W) − I(X;Z) = 0.
    let pair = bss05();
    let wz = CondChannel::deterministic(
        vec![VarId::new(Var::X, 2)],
        vec![VarId::new(Var::W, 2), VarId::new(Var::Z, 2)],
        |x| x * 2 + x,
    )
    .unwrap();
    let src = SecInsSource::from_pair(&pair, &wz).unwrap();
    let v12 = CondChannel::deterministic(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V1, 1), VarId::new(Var::V2, 1)],
        |_| 0,
    )
    .unwrap();
    let u = CondChannel::constant(
        vec![
            VarId::new(Var::X, 2),
            VarId::new(Var::V1, 1),
            VarId::new(Var::V2, 1),
        ],
        VarId::new(Var::U, 1),
        0,
    )
    .unwrap();
    let p = eval_theorem3(&src, &AuxSystem3::new(v12, u).unwrap(), 0.7).unwrap();
    assert_abs_diff_eq!(p.delta_cap, 0.0, epsilon = 1e-12);
}

#[test]
fn theorem3_u_copy_of_x_always_evaluates_to_zero() {
    // U := X forces every U-conditioned information to zero, so the clamp
    // at zero is exactly attained whatever the side information does.
    let mut rng = stream_rng(14, 0);
    for _ in 0..20 {
        let pair = rand_pair(&mut rng, 2, 2);
        let wz = rand_channel(
            &mut rng,
            vec![VarId::new(Var::X, 2)],
            vec![VarId::new(Var::W, 2), VarId::new(Var::Z, 2)],
        );
        let src = SecInsSource::from_pair(&pair, &wz).unwrap();
        let v12 = rand_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V1, 2), VarId::new(Var::V2, 2)],
        );
        let u = CondChannel::deterministic(
            vec![
                VarId::new(Var::X, 2),
                VarId::new(Var::V1, 2),
                VarId::new(Var::V2, 2),
            ],
            vec![VarId::new(Var::U, 2)],
            |r| r / 4,
        )
        .unwrap();
        let p = eval_theorem3(&src, &AuxSystem3::new(v12, u).unwrap(), 10.0).unwrap();
        assert_abs_diff_eq!(p.delta_cap, 0.0, epsilon = 1e-12);
    }
}

#[test]
fn theorem3_rejects_infeasible_secure_rate() {
    let src = SecInsSource::without_side_information(&bss05()).unwrap();
    let v12 = CondChannel::new(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V1, 2), VarId::new(Var::V2, 1)],
        vec![1.0, 0.0, 0.0, 1.0],
    )
    .unwrap();
    let u = CondChannel::constant(
        vec![
            VarId::new(Var::X, 2),
            VarId::new(Var::V1, 2),
            VarId::new(Var::V2, 1),
        ],
        VarId::new(Var::U, 1),
        0,
    )
    .unwrap();
    // V1 = Y needs I(Y;V1|W) = 1 bit on the secure link.
    let err = eval_theorem3(&src, &AuxSystem3::new(v12, u).unwrap(), 0.5).unwrap_err();
    match err {
        crate::Error::Constraint { bound, .. } => assert!(bound.contains("I(Y;V1|W)")),
        other => panic!("expected constraint error, got {other}"),
    }
}

#[test]
fn sec_ins_source_rejects_markov_violation() {
    // W = Y leaks helper information past X.
    let mut probs = vec![0.0; 16];
    for x in 0..2usize {
        for y in 0..2usize {
            let pxy: f64 = if x == y { 0.475 } else { 0.025 };
            let (w, z) = (y, 0);
            probs[((w * 2 + x) * 2 + y) * 2 + z] = pxy;
        }
    }
    let joint = JointDist::new(
        vec![
            VarId::new(Var::W, 2),
            VarId::new(Var::X, 2),
            VarId::new(Var::Y, 2),
            VarId::new(Var::Z, 2),
        ],
        probs,
    )
    .unwrap();
    let err = SecInsSource::new(joint).unwrap_err();
    assert!(err.to_string().contains("I(Y;(W,Z)|X)"));
}

fn fast_opts() -> OptimizeOpts {
    OptimizeOpts {
        starts: 16,
        max_passes: 120,
        ..OptimizeOpts::default()
    }
}

#[test]
fn optimize_theorem1_zero_budget_is_zero() {
    let out = optimize_theorem1(&bss05(), 0.0, &fast_opts()).unwrap();
    assert!(out.point.delta_cap <= 1e-9);
    assert!(out.point.ry_min <= 1e-9);
}

#[test]
fn optimize_theorem1_meets_closed_form_at_full_rate() {
    let out = optimize_theorem1(&bss05(), 1.0, &fast_opts()).unwrap();
    assert!(out.point.delta_cap >= I_XY_BSS_005 - 5e-3);
    assert!(out.point.delta_cap <= I_XY_BSS_005 + 1e-9);
}

#[test]
fn optimize_theorem1_meets_closed_form_at_half_rate() {
    let out = optimize_theorem1(&bss05(), 0.5, &fast_opts()).unwrap();
    assert!(out.point.delta_cap >= DELTA_MGL_005_HALF - 5e-3);
    assert!(out.point.delta_cap <= DELTA_MGL_005_HALF + 1e-9);
    assert!(out.point.ry_min <= 0.5 + 1e-9);
}

#[test]
fn optimize_theorem2_tracks_min_of_budget_and_entropy() {
    let src = bss05();
    for (budget, expect) in [(0.0, 0.0), (0.5, 0.5), (1.2, 1.0)] {
        let out = optimize_theorem2(&src, budget, &fast_opts()).unwrap();
        assert!((out.point.delta_cap - expect).abs() <= 5e-3);
        assert!(out.point.delta_cap <= budget.min(1.0) + 1e-9);
    }
}

#[test]
fn optimize_theorem2_reports_low_rate_certificate() {
    // Among max-Δ candidates the reported corner has the smallest H(X|V);
    // at ry = 0.5 that is the boundary rate h(0.05 ∗ h⁻¹(0.5)), not the
    // one-time-pad's H(X|V) = 1.
    let out = optimize_theorem2(&bss05(), 0.5, &fast_opts()).unwrap();
    assert!(out.point.rx_min <= 0.607_395_175_017_164_9 + 1e-6);
}

#[test]
fn optimize_theorem3_degenerate_budgets_zero() {
    let src = SecInsSource::without_side_information(&bss05()).unwrap();
    let out = optimize_theorem3(&src, 0.0, 0.0, &fast_opts()).unwrap();
    assert!(out.point.delta_cap <= 1e-9);
}

#[test]
fn optimize_theorem3_matches_theorem2_reduction() {
    let src = SecInsSource::without_side_information(&bss05()).unwrap();
    let opts = OptimizeOpts {
        starts: 8,
        max_passes: 80,
        ..OptimizeOpts::default()
    };
    let t3 = optimize_theorem3(&src, 0.5, 0.0, &opts).unwrap();
    let t2 = optimize_theorem2(&bss05(), 0.5, &opts).unwrap();
    assert!((t3.point.delta_cap - t2.point.delta_cap).abs() <= 5e-3);
}

#[test]
fn optimizer_handles_nonbinary_alphabets() {
    // Ternary helper observation: the binary construction seeds drop out
    // and the generic seeds plus random starts must still return a
    // feasible certificate within the region.
    let mut rng = stream_rng(19, 0);
    let src = rand_pair(&mut rng, 2, 3);
    let hx = src.joint().entropy(&[Var::X]).unwrap();
    let out = optimize_theorem1(&src, 0.4, &fast_opts()).unwrap();
    assert!(out.point.ry_min <= 0.4 + 1e-9);
    assert!(out.point.delta_cap <= 0.4 + 1e-9);
    assert!(out.point.delta_cap <= hx + 1e-9);
    assert_eq!(eval_theorem1(&src, &out.aux).unwrap(), out.point);

    let out2 = optimize_theorem2(&src, 0.4, &fast_opts()).unwrap();
    assert!(out2.point.ry_min <= 0.4 + 1e-9);
    assert!(out2.point.delta_cap <= 0.4 + 1e-9);
    assert!(out2.point.delta_cap >= out.point.delta_cap - 1e-9);
}

#[test]
fn optimizer_certificate_reevaluates_bitwise() {
    let out = optimize_theorem1(&bss05(), 0.4, &fast_opts()).unwrap();
    let again = eval_theorem1(&bss05(), &out.aux).unwrap();
    assert_eq!(out.point, again);

    let out2 = optimize_theorem2(&bss05(), 0.4, &fast_opts()).unwrap();
    let again2 = eval_theorem2(&bss05(), &out2.aux, 0.4).unwrap();
    assert_eq!(out2.point, again2);
}

#[test]
fn optimizer_is_deterministic() {
    let a = optimize_theorem1(&bss05(), 0.6, &fast_opts()).unwrap();
    let b = optimize_theorem1(&bss05(), 0.6, &fast_opts()).unwrap();
    assert_eq!(a.point, b.point);
    assert_eq!(a.aux, b.aux);
}

#[test]
fn optimize_rejects_negative_budget() {
    assert!(optimize_theorem1(&bss05(), -0.1, &fast_opts()).is_err());
}

#[test]
fn sweep_singleton_zero_grid() {
    let src = SweepSource::Pair(bss05());
    let opts = SweepOpts {
        optimize: fast_opts(),
        rins_budget: 0.0,
    };
    let points = sweep(Model::OneSided, &src, &[0.0], &opts).unwrap();
    assert_eq!(points.len(), 1);
    assert!(points[0].delta_cap <= 1e-9);
}

#[test]
fn sweep_rejects_bad_grids() {
    let src = SweepSource::Pair(bss05());
    let opts = SweepOpts::default();
    assert!(sweep(Model::OneSided, &src, &[], &opts).is_err());
    assert!(sweep(Model::OneSided, &src, &[0.2, 0.2], &opts).is_err());
    assert!(sweep(Model::OneSided, &src, &[-0.1, 0.5], &opts).is_err());
}

#[test]
fn sweep_monotone_and_two_sided_dominates() {
    let src = SweepSource::Pair(bss05());
    let opts = SweepOpts {
        optimize: OptimizeOpts {
            starts: 8,
            max_passes: 80,
            ..OptimizeOpts::default()
        },
        rins_budget: 0.0,
    };
    let grid = [0.2, 0.5, 0.8];
    let one = sweep(Model::OneSided, &src, &grid, &opts).unwrap();
    let two = sweep(Model::TwoSided, &src, &grid, &opts).unwrap();
    for k in 1..grid.len() {
        assert!(one[k].delta_cap >= one[k - 1].delta_cap - 1e-6);
        assert!(two[k].delta_cap >= two[k - 1].delta_cap - 1e-6);
    }
    for k in 0..grid.len() {
        assert!(two[k].delta_cap >= one[k].delta_cap);
    }
}
