use approx::assert_abs_diff_eq;

use super::*;
use crate::binary_analytic::{achieving_channel_one_sided, achieving_channels_two_sided, BssSource};
use crate::infomeasures::{CondChannel, VarId};
use crate::rng::stream_rng;

fn bss05() -> SourcePair {
    SourcePair::binary_symmetric(0.05).unwrap()
}

/// Achieving one-sided auxiliary at helper rate 1/2 (I(V;Y) = 1/2 ± 1e-12).
fn half_rate_aux() -> AuxSystem1 {
    achieving_channel_one_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap()
}

fn one_sided_cfg(n: usize, margin: f64, eps: f64, seed: u64, trials: usize) -> SimConfig {
    SimConfig::new(
        n,
        bss05(),
        SimAux::OneSided(half_rate_aux()),
        margin,
        eps,
        seed,
        trials,
    )
    .unwrap()
}

fn two_sided_cfg(n: usize, margin: f64, eps: f64, seed: u64, trials: usize) -> SimConfig {
    let aux = achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap();
    SimConfig::new(
        n,
        bss05(),
        SimAux::TwoSided(aux),
        margin,
        eps,
        seed,
        trials,
    )
    .unwrap()
}

fn draw_pair(seed: u64, stream: u64, n: usize) -> (Vec<u8>, Vec<u8>) {
    use rand::Rng;
    let mut rng = stream_rng(seed, stream);
    let src = bss05();
    let mut cdf = Vec::new();
    let mut acc = 0.0;
    for &p in src.joint().probs() {
        acc += p;
        cdf.push(acc);
    }
    *cdf.last_mut().unwrap() = f64::INFINITY;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        let cell = cdf.iter().position(|&c| u < c).unwrap();
        xs.push((cell / 2) as u8);
        ys.push((cell % 2) as u8);
    }
    (xs, ys)
}

#[test]
fn typical_fraction_grows_with_blocklength() {
    // At n = 1000, eps = 0.2 the rare-cell count window is about one
    // standard deviation wide, so only half of i.i.d. draws are jointly
    // typical (208 of 400 under these seeds); concentration kicks in an
    // order of magnitude later, where the fraction clears 99%.
    let count = |n: usize, trials: u64| -> usize {
        (0..trials)
            .filter(|&t| {
                let (xs, ys) = draw_pair(3, t, n);
                jointly_typical(&[&xs, &ys], bss05().joint(), 0.2).unwrap()
            })
            .count()
    };
    assert_eq!(count(1000, 400), 208);
    assert!(count(10_000, 200) as f64 / 200.0 >= 0.99);
}

#[test]
fn config_guard_rejects_large_enumerations() {
    let err = SimConfig::new(
        30,
        bss05(),
        SimAux::OneSided(half_rate_aux()),
        0.3,
        0.35,
        1,
        10,
    )
    .unwrap_err();
    assert!(err.to_string().contains("guard"));
    // Two-sided enumerates (|X||Y|)^n, so the guard trips at half the n.
    assert!(SimConfig::new(12, bss05(), SimAux::TwoSided(
        achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap()
    ), 0.3, 0.35, 1, 10).is_ok());
    assert!(SimConfig::new(13, bss05(), SimAux::TwoSided(
        achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap()
    ), 0.3, 0.35, 1, 10).is_err());
}

#[test]
fn oversized_codebooks_trip_the_materialization_guard() {
    // n = 20 passes the enumeration guard but a margin of 8 bits/symbol
    // would materialize a 2^170-codeword helper codebook.
    let cfg = one_sided_cfg(20, 8.0, 0.35, 1, 1);
    let err = build_code(&cfg).unwrap_err();
    assert!(err.to_string().contains("guard"));
}

#[test]
fn config_rejects_degenerate_parameters() {
    assert!(SimConfig::new(0, bss05(), SimAux::OneSided(half_rate_aux()), 0.3, 0.35, 1, 1).is_err());
    assert!(SimConfig::new(4, bss05(), SimAux::OneSided(half_rate_aux()), 0.3, 0.0, 1, 1).is_err());
    assert!(SimConfig::new(4, bss05(), SimAux::OneSided(half_rate_aux()), 0.3, 0.35, 1, 0).is_err());
}

#[test]
fn same_seed_builds_identical_code() {
    let cfg = one_sided_cfg(8, 0.3, 0.35, 42, 1);
    assert_eq!(build_code(&cfg).unwrap(), build_code(&cfg).unwrap());
    let other = one_sided_cfg(8, 0.3, 0.35, 43, 1);
    assert_ne!(build_code(&cfg).unwrap(), build_code(&other).unwrap());
}

#[test]
fn helper_codebook_size_follows_the_exponent() {
    // I(V;Y) = 1/2 within 1e-12, so ⌈4 · (0.5 + 0.25)⌉ = 3 bits.
    let cfg = one_sided_cfg(4, 0.25, 0.35, 1, 1);
    let code = build_code(&cfg).unwrap();
    assert_eq!(code.helper_codebook().len(), 8);
    assert_eq!(code.rates().helper_bits, 3);
}

#[test]
fn degenerate_helper_with_zero_margin_has_one_codeword() {
    let aux = AuxSystem1::new(
        CondChannel::constant(vec![VarId::new(Var::Y, 2)], VarId::new(Var::V, 1), 0).unwrap(),
    )
    .unwrap();
    let cfg = SimConfig::new(6, bss05(), SimAux::OneSided(aux), 0.0, 0.35, 1, 1).unwrap();
    let code = build_code(&cfg).unwrap();
    assert_eq!(code.helper_codebook().len(), 1);
}

#[test]
fn helper_encode_finds_its_own_codeword_under_identity_channel() {
    // With V ≡ Y and loose eps the typicality check reduces to "no
    // zero-probability tuple", i.e. v = y symbol by symbol.
    let aux = AuxSystem1::new(
        CondChannel::identity(VarId::new(Var::Y, 2), Var::V).unwrap(),
    )
    .unwrap();
    let cfg = SimConfig::new(8, bss05(), SimAux::OneSided(aux), 0.3, 1.0, 5, 1).unwrap();
    let code = build_code(&cfg).unwrap();
    let y = code.helper_codebook()[3].clone();
    let first = code
        .helper_codebook()
        .iter()
        .position(|v| *v == y)
        .unwrap();
    assert_eq!(code.helper_encode(&y, 1.0).unwrap(), Some(first));
}

#[test]
fn helper_encode_fails_on_empty_typical_set() {
    let aux = AuxSystem1::new(
        CondChannel::identity(VarId::new(Var::Y, 2), Var::V).unwrap(),
    )
    .unwrap();
    let cfg = SimConfig::new(3, bss05(), SimAux::OneSided(aux), 0.0, 0.05, 9, 1).unwrap();
    let code = build_code(&cfg).unwrap();
    // No length-3 binary sequence is 0.05-typical for a uniform bit.
    assert_eq!(code.helper_encode(&[0, 1, 0], 0.05).unwrap(), None);
}

#[test]
fn helper_covering_at_small_blocklength_hits_the_integer_gap() {
    // At n = 12 the off-diagonal count window of p(v,y) contains no
    // integer, so no codeword is ever jointly typical and the covering
    // fails with certainty; n = 14 admits exactly one mismatch of each
    // orientation and covering mostly succeeds.
    let rep12 = run_experiment(&one_sided_cfg(12, 0.3, 0.35, 1, 200)).unwrap();
    assert_eq!(rep12.helper_encode_failure_rate, 1.0);
    let rep14 = run_experiment(&one_sided_cfg(14, 0.3, 0.35, 1, 200)).unwrap();
    assert!(rep14.helper_encode_failure_rate < 0.5);
}

#[test]
fn one_sided_message_ignores_the_helper_sequence() {
    let cfg = one_sided_cfg(8, 0.3, 0.35, 7, 1);
    let code = build_code(&cfg).unwrap();
    let (xs, _) = draw_pair(7, 50, 8);
    let junk = vec![0u8; 8];
    let a = code.alice_encode(&xs, None, 0.35).unwrap();
    let b = code.alice_encode(&xs, Some(&junk), 0.35).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.s_u, None);
}

#[test]
fn sequences_in_the_same_bin_share_the_message() {
    let cfg = one_sided_cfg(8, 0.0, 0.35, 7, 1);
    let code = build_code(&cfg).unwrap();
    let mut seq = Vec::new();
    let target = code.x_bin_of(&[0; 8]);
    let mut partner = None;
    for idx in 1..256u64 {
        index_seq(idx, 2, 8, &mut seq);
        if code.x_bin_of(&seq) == target {
            partner = Some(seq.clone());
            break;
        }
    }
    let partner = partner.expect("256 sequences into at most 2^8 bins collide");
    assert_eq!(
        code.alice_encode(&[0; 8], None, 0.35).unwrap().m_x,
        code.alice_encode(&partner, None, 0.35).unwrap().m_x
    );
}

#[test]
fn two_sided_encoder_requires_the_helper_codeword() {
    let cfg = two_sided_cfg(8, 0.3, 0.35, 7, 1);
    let code = build_code(&cfg).unwrap();
    assert!(code.alice_encode(&[0; 8], None, 0.35).is_err());
}

#[test]
fn u_search_selects_a_typical_codeword_when_it_succeeds() {
    // Success is rare at n = 12 (the selected u must reproduce x ⊕ v
    // exactly and keep typical counts): 51 of 500 channel draws under
    // seed stream (7, t). When it does succeed the selected codeword is
    // jointly typical by construction.
    let cfg = two_sided_cfg(12, 0.3, 0.35, 1, 1);
    let code = build_code(&cfg).unwrap();
    let joint = bss05()
        .joint()
        .extend(
            achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5)
                .unwrap()
                .v_channel(),
        )
        .unwrap();
    let pxv = joint.marginalize(&[Var::V, Var::X]).unwrap();
    let mut cdf = Vec::new();
    let mut acc = 0.0;
    for &p in pxv.probs() {
        acc += p;
        cdf.push(acc);
    }
    *cdf.last_mut().unwrap() = f64::INFINITY;
    let mut successes = 0;
    for t in 0..500u64 {
        use rand::Rng;
        let mut rng = stream_rng(7, t);
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for _ in 0..12 {
            let u: f64 = rng.gen();
            let cell = cdf.iter().position(|&c| u < c).unwrap();
            vs.push((cell / 2) as u8);
            xs.push((cell % 2) as u8);
        }
        let msg = code.alice_encode(&xs, Some(&vs), 0.35).unwrap();
        if !msg.u_search_failed {
            successes += 1;
            let s_u = msg.s_u.unwrap();
            let selected = code
                .u_codebook()
                .unwrap()
                .iter()
                .enumerate()
                .find(|(s, u)| {
                    code.two.as_ref().unwrap().u_bins.assign(*s as u64) == s_u
                        && jointly_typical(
                            &[u, &vs, &xs],
                            &code.two.as_ref().unwrap().dist_uvx,
                            0.35,
                        )
                        .unwrap()
                });
            assert!(selected.is_some());
        }
    }
    assert_eq!(successes, 51);
}

#[test]
fn lossless_index_bins_decode_perfectly_under_loose_typicality() {
    // One bin per sequence and eps large enough that typicality never
    // filters: the decoder returns the unique bin member, which is the
    // truth.
    let cfg = one_sided_cfg(6, 0.3, 10.0, 3, 1);
    let code = build_code(&cfg).unwrap().with_x_bin_map(BinMap::Modulo { bins: 64 });
    for t in 0..50 {
        let (xs, ys) = draw_pair(3, 100 + t, 6);
        let l = code.helper_encode(&ys, 10.0).unwrap().unwrap_or(0);
        let msg = code.alice_encode(&xs, None, 10.0).unwrap();
        assert_eq!(code.bob_decode(&msg, l, 10.0).unwrap().as_deref(), Some(&xs[..]));
    }
}

#[test]
fn garbage_side_information_with_tight_bins_fails() {
    // Helper index pinned to an unrelated codeword and margin-0 bins:
    // decoding collapses.
    let cfg = one_sided_cfg(12, 0.0, 0.35, 11, 1);
    let code = build_code(&cfg).unwrap();
    let mut errors = 0;
    for t in 0..50 {
        let (xs, _) = draw_pair(11, 300 + t, 12);
        let msg = code.alice_encode(&xs, None, 0.35).unwrap();
        if code.bob_decode(&msg, 0, 0.35).unwrap().as_deref() != Some(&xs[..]) {
            errors += 1;
        }
    }
    assert!(errors >= 45);
}

#[test]
fn generous_margin_beats_matched_rates_at_n14() {
    // Median error over 20 seeded codes: nominal exponents plus 0.3 bits
    // against margin 0.
    let median = |margin: f64| {
        let mut pes: Vec<f64> = (1..=20u64)
            .map(|seed| {
                run_experiment(&one_sided_cfg(14, margin, 0.35, seed, 50))
                    .unwrap()
                    .pe_hat
            })
            .collect();
        pes.sort_by(f64::total_cmp);
        0.5 * (pes[9] + pes[10])
    };
    assert!(median(0.3) < median(0.0));
}

#[test]
fn single_bin_discloses_nothing() {
    let cfg = one_sided_cfg(8, 0.3, 0.35, 5, 1);
    let code = build_code(&cfg).unwrap().with_x_bin_map(BinMap::Modulo { bins: 1 });
    let equiv = exact_equivocation(&code, &cfg).unwrap();
    let hx = bss05().joint().entropy(&[Var::X]).unwrap();
    assert_abs_diff_eq!(equiv, hx, epsilon = 1e-12);
}

#[test]
fn singleton_bins_disclose_everything() {
    let cfg = one_sided_cfg(8, 0.3, 0.35, 5, 1);
    let code = build_code(&cfg).unwrap().with_x_bin_map(BinMap::Modulo { bins: 256 });
    assert_abs_diff_eq!(exact_equivocation(&code, &cfg).unwrap(), 0.0, epsilon = 1e-12);
}

#[test]
fn balanced_bins_give_the_counting_value() {
    // Uniform X over n = 8 into 2^5 perfectly balanced bins:
    // H(J) = 5 exactly, so the equivocation is (8 − 5)/8.
    let cfg = one_sided_cfg(8, 0.3, 0.35, 5, 1);
    let code = build_code(&cfg).unwrap().with_x_bin_map(BinMap::Modulo { bins: 32 });
    assert_abs_diff_eq!(
        exact_equivocation(&code, &cfg).unwrap(),
        0.375,
        epsilon = 1e-12
    );
}

#[test]
fn equivocation_identity_against_independent_enumeration() {
    // exact_equivocation · n = n·H(X) − H(m_X), with H(m_X) recomputed
    // here by direct bin-mass enumeration, and the Slepian-Wolf floor
    // H(X) − R_x_used holds.
    let cfg = one_sided_cfg(8, 0.3, 0.35, 21, 1);
    let code = build_code(&cfg).unwrap();
    let equiv = exact_equivocation(&code, &cfg).unwrap();

    let mut bins = std::collections::HashMap::new();
    let mut seq = Vec::new();
    for idx in 0..256u64 {
        index_seq(idx, 2, 8, &mut seq);
        let p: f64 = seq.iter().map(|&s| [0.5, 0.5][s as usize]).product();
        *bins.entry(code.x_bin_of(&seq)).or_insert(0.0) += p;
    }
    let h_j: f64 = bins.values().map(|&p: &f64| -p * p.log2()).sum();
    let hx = 1.0;
    assert!((equiv * 8.0 - (8.0 * hx - h_j)).abs() <= 1e-12);
    assert!(equiv >= hx - code.rates().alice_rate(8) - 1e-12);
}

#[test]
fn two_sided_equivocation_dominates_one_sided_at_matched_seed() {
    let one = run_experiment(&one_sided_cfg(8, 0.3, 0.35, 2, 20)).unwrap();
    let two = run_experiment(&two_sided_cfg(8, 0.3, 0.35, 2, 20)).unwrap();
    assert!(two.equivocation_per_symbol >= one.equivocation_per_symbol);
}

#[test]
fn generous_rates_with_loose_typicality_are_lossless_and_leak_everything() {
    // All 64 sequences land in distinct bins of a 2^16-bin map for this
    // seed, so p_e = 0 and H(m_X) = H(X^6) exactly.
    let cfg = one_sided_cfg(6, 2.0, 10.0, 1, 1);
    let rep = run_experiment(&cfg).unwrap();
    assert_eq!(rep.pe_hat, 0.0);
    assert_eq!(rep.equivocation_per_symbol, 0.0);
}

#[test]
fn identical_configs_reproduce_the_report() {
    let a = run_experiment(&one_sided_cfg(10, 0.3, 0.35, 33, 40)).unwrap();
    let b = run_experiment(&one_sided_cfg(10, 0.3, 0.35, 33, 40)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn report_csv_row_is_fixed_width() {
    let rep = run_experiment(&one_sided_cfg(8, 0.3, 0.35, 33, 10)).unwrap();
    let row = rep.csv_row();
    assert_eq!(row.split(',').count(), SimReport::CSV_HEADER.split(',').count());
    assert!(row.starts_with("one,8,33,10,0.300000,0.350000,"));
}

#[test]
fn rate_accounting_satisfies_the_decomposition() {
    // I(X;U|V) + H(X|U,V) = H(X|V) for the two-sided exponents.
    let cfg = two_sided_cfg(8, 0.3, 0.35, 3, 1);
    let code = build_code(&cfg).unwrap();
    let joint = bss05()
        .joint()
        .extend(
            achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5)
                .unwrap()
                .v_channel(),
        )
        .unwrap();
    let h_x_given_v = joint.cond_entropy(&[Var::X], &[Var::V]).unwrap();
    let sum = code.rates().u_bin_rate + code.rates().x_bin_rate;
    assert_abs_diff_eq!(sum, h_x_given_v, epsilon = 1e-9);
}
