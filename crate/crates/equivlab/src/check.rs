//! Built-in consistency checks: reduction identities between the three
//! regions and the Mrs. Gerber dominance property, evaluated on seeded
//! random instances. The `check` subcommand runs these; the test suite
//! reuses the same functions.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::binary_analytic::mgl_bound;
use crate::error::Result;
use crate::infomeasures::{CondChannel, JointDist, Var, VarId};
use crate::regions::{
    eval_theorem1, eval_theorem2, eval_theorem3, AuxSystem1, AuxSystem2, AuxSystem3, SecInsSource,
    SourcePair,
};
use crate::rng::stream_rng;

/// Reduction identities must hold to this tolerance.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Mrs. Gerber dominance must hold to this tolerance.
pub const MGL_TOL: f64 = 1e-9;

/// Outcome of one named identity suite.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst violation observed and the tolerance it was held against.
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub results: Vec<CheckResult>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// Random probability row of the given width.
pub fn random_simplex(rng: &mut ChaCha8Rng, width: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..width).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= sum);
    row
}

/// Random source pair over given alphabet sizes.
pub fn random_pair_source(rng: &mut ChaCha8Rng, x_card: usize, y_card: usize) -> SourcePair {
    SourcePair::new(
        JointDist::new(
            vec![VarId::new(Var::X, x_card), VarId::new(Var::Y, y_card)],
            random_simplex(rng, x_card * y_card),
        )
        .expect("random simplex is a distribution"),
    )
    .expect("X, Y layout")
}

/// Random conditional channel.
pub fn random_channel(
    rng: &mut ChaCha8Rng,
    inputs: Vec<VarId>,
    outputs: Vec<VarId>,
) -> CondChannel {
    let rows: usize = inputs.iter().map(|v| v.card).product();
    let width: usize = outputs.iter().map(|v| v.card).product();
    let mut flat = Vec::with_capacity(rows * width);
    for _ in 0..rows {
        flat.extend(random_simplex(rng, width));
    }
    CondChannel::new(inputs, outputs, flat).expect("random rows form a channel")
}

fn result(name: &'static str, worst: f64, tol: f64, cases: usize) -> CheckResult {
    CheckResult {
        name,
        passed: worst <= tol,
        detail: format!("worst violation {worst:.3e} over {cases} cases (tolerance {tol:.0e})"),
    }
}

/// rx_min + delta_cap = H(X) for every one-sided auxiliary.
pub fn theorem1_complementarity(seed: u64, cases: usize) -> Result<CheckResult> {
    let mut rng = stream_rng(seed, 201);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let src = random_pair_source(&mut rng, 2, 2);
        let aux = AuxSystem1::new(random_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, 3)],
        ))?;
        let p = eval_theorem1(&src, &aux)?;
        let hx = src.joint().entropy(&[Var::X])?;
        worst = worst.max((p.rx_min + p.delta_cap - hx).abs());
    }
    Ok(result("theorem1-complementarity", worst, MGL_TOL, cases))
}

/// With a constant U the two-sided equivocation collapses to
/// min(I(X;V), R_y), the one-sided value.
pub fn theorem2_constant_u_reduction(seed: u64, cases: usize) -> Result<CheckResult> {
    let mut rng = stream_rng(seed, 202);
    let mut worst = 0.0f64;
    let mut used = 0;
    for _ in 0..cases {
        let src = random_pair_source(&mut rng, 2, 2);
        let v = random_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, 3)],
        );
        let ry = 0.2 + rng.gen::<f64>();
        let t1 = eval_theorem1(&src, &AuxSystem1::new(v.clone())?)?;
        if ry < t1.ry_min {
            continue;
        }
        let const_u = CondChannel::constant(
            vec![VarId::new(Var::X, 2), VarId::new(Var::V, 3)],
            VarId::new(Var::U, 1),
            0,
        )?;
        let t2 = eval_theorem2(&src, &AuxSystem2::new(v, const_u)?, ry)?;
        worst = worst.max((t2.delta_cap - t1.delta_cap.min(ry)).abs());
        used += 1;
    }
    Ok(result(
        "theorem2-constant-U-reduction",
        worst,
        IDENTITY_TOL,
        used,
    ))
}

/// Largest deviation between a theorem-3 evaluation with degenerate W, Z,
/// V2 and the matching theorem-2 evaluation, over seeded random instances.
pub fn theorem3_reduction_worst_gap(seed: u64, cases: usize) -> Result<(f64, usize)> {
    let mut rng = stream_rng(seed, 203);
    let mut worst = 0.0f64;
    let mut used = 0;
    for _ in 0..cases {
        let src = random_pair_source(&mut rng, 2, 2);
        let v = random_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, 3)],
        );
        let u = random_channel(
            &mut rng,
            vec![VarId::new(Var::X, 2), VarId::new(Var::V, 3)],
            vec![VarId::new(Var::U, 3)],
        );
        let aux2 = AuxSystem2::new(v, u)?;
        let rsec = 0.1 + rng.gen::<f64>();
        let t2 = match eval_theorem2(&src, &aux2, rsec) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let src3 = SecInsSource::without_side_information(&src)?;
        let t3 = eval_theorem3(&src3, &AuxSystem3::from_two_sided(&aux2)?, rsec)?;
        worst = worst
            .max((t3.delta_cap - t2.delta_cap).abs())
            .max((t3.rx_min - t2.rx_min).abs())
            .max((t3.ry_min - t2.ry_min).abs());
        used += 1;
    }
    Ok((worst, used))
}

/// Degenerate-side-information reduction of the secure/insecure region to
/// the two-sided region.
pub fn theorem3_reduction(seed: u64, cases: usize) -> Result<CheckResult> {
    let (worst, used) = theorem3_reduction_worst_gap(seed, cases)?;
    Ok(result("theorem3-reduction", worst, IDENTITY_TOL, used))
}

/// Mrs. Gerber's lemma as used in the binary converse: for X = Y ⊕ Ber(δ)
/// and any p(v|y), H(X|V) ≥ h(δ ∗ h⁻¹(H(Y|V))).
pub fn mgl_dominance(seed: u64, cases: usize) -> Result<CheckResult> {
    let mut rng = stream_rng(seed, 204);
    let mut worst = 0.0f64;
    for _ in 0..cases {
        let delta = 0.5 * rng.gen::<f64>();
        let v_card = 1 + (rng.gen::<f64>() * 6.0) as usize;
        let src = SourcePair::binary_symmetric(delta)?;
        let ch = random_channel(
            &mut rng,
            vec![VarId::new(Var::Y, 2)],
            vec![VarId::new(Var::V, v_card.min(6))],
        );
        let joint = src.joint().extend(&ch)?;
        let h_x_given_v = joint.cond_entropy(&[Var::X], &[Var::V])?;
        let h_y_given_v = joint.cond_entropy(&[Var::Y], &[Var::V])?;
        let bound = mgl_bound(delta, h_y_given_v.clamp(0.0, 1.0))?;
        worst = worst.max(bound - h_x_given_v);
    }
    Ok(result("mgl-dominance", worst, MGL_TOL, cases))
}

/// Run every identity suite. `cmd check` prints one line per result and
/// fails when any identity is violated.
pub fn run_all(seed: u64) -> Result<CheckReport> {
    Ok(CheckReport {
        results: vec![
            theorem1_complementarity(seed, 200)?,
            theorem2_constant_u_reduction(seed, 200)?,
            theorem3_reduction(seed, 100)?,
            mgl_dominance(seed, 1000)?,
        ],
    })
}
