//! Acceptance suite: one test per criterion, each printing a pass line
//! (visible with `cargo test --test acceptance -- --nocapture`).
//!
//! Oracle note: closed-form reference values are recomputed here with an
//! independent binary-entropy/bisection implementation, not the library's.

use std::process::Command;
use std::time::Instant;

use equivlab::binary_analytic::{
    achieving_channel_one_sided, achieving_channels_two_sided, figure4_table, BssSource,
};
use equivlab::binning::{build_code, exact_equivocation, run_experiment, SimAux, SimConfig};
use equivlab::check;
use equivlab::regions::{optimize_theorem1, optimize_theorem2, OptimizeOpts, SourcePair};

// Test-side oracle: binary entropy and its inverse by plain bisection.
fn h_oracle(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2()) - (1.0 - p) * (1.0 - p).log2()
}

fn h_inv_oracle(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h_oracle(mid) < t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn conv_oracle(a: f64, b: f64) -> f64 {
    a * (1.0 - b) + b * (1.0 - a)
}

fn one_sided_oracle(delta: f64, ry: f64) -> (f64, f64) {
    let rx = h_oracle(conv_oracle(delta, h_inv_oracle(1.0 - ry.min(1.0))));
    (rx, 1.0 - rx)
}

fn grid_20() -> Vec<f64> {
    (1..=20).map(|k| k as f64 * 0.05).collect()
}

#[test]
fn criterion_1_closed_form_reproduction() {
    let start = Instant::now();
    let grid = grid_20();
    let rows = figure4_table(0.05, &grid).unwrap();
    assert_eq!(rows.len(), 20);
    for row in &rows {
        let (rx, d1) = one_sided_oracle(0.05, row.ry);
        assert!((row.rx_min - rx).abs() <= 1e-9, "rx at ry={}", row.ry);
        assert!((row.delta_one - d1).abs() <= 1e-9, "delta_one at ry={}", row.ry);
        assert_eq!(row.delta_two, row.ry.min(1.0), "delta_two at ry={}", row.ry);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (closed-form reproduction, 20 points, {elapsed:?}): PASS");
}

#[test]
fn criterion_2_optimizer_vs_oracle_one_sided() {
    let start = Instant::now();
    let src = SourcePair::binary_symmetric(0.05).unwrap();
    let opts = OptimizeOpts::default();
    assert_eq!(opts.starts, 64);
    for ry in grid_20() {
        let out = optimize_theorem1(&src, ry, &opts).unwrap();
        let (_, oracle) = one_sided_oracle(0.05, ry);
        assert!(
            out.point.delta_cap >= oracle - 5e-3,
            "fell short at ry={ry}: {} vs {oracle}",
            out.point.delta_cap
        );
        assert!(
            out.point.delta_cap <= oracle + 1e-9,
            "exceeded the converse at ry={ry}: {} vs {oracle}",
            out.point.delta_cap
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 2 (one-sided optimizer vs oracle, {elapsed:?}): PASS");
}

#[test]
fn criterion_3_optimizer_vs_oracle_two_sided() {
    let src = SourcePair::binary_symmetric(0.05).unwrap();
    let opts = OptimizeOpts::default();
    for ry in grid_20() {
        let two = optimize_theorem2(&src, ry, &opts).unwrap();
        assert!(
            two.point.delta_cap >= ry.min(1.0) - 5e-3,
            "fell short at ry={ry}: {}",
            two.point.delta_cap
        );
        if ry <= 1.0 {
            let one = optimize_theorem1(&src, ry, &opts).unwrap();
            assert!(
                two.point.delta_cap > one.point.delta_cap,
                "no strict dominance at ry={ry}: {} vs {}",
                two.point.delta_cap,
                one.point.delta_cap
            );
        }
    }
    println!("criterion 3 (two-sided optimizer vs oracle, strict dominance): PASS");
}

#[test]
fn criterion_4_reduction_identities() {
    let r3 = check::theorem3_reduction(1, 100).unwrap();
    assert!(r3.passed, "{}", r3.detail);
    let r2 = check::theorem2_constant_u_reduction(1, 100).unwrap();
    assert!(r2.passed, "{}", r2.detail);
    println!("criterion 4 (reduction identities to 1e-12): PASS");
}

#[test]
fn criterion_5_mrs_gerber_property_suite() {
    let r = check::mgl_dominance(1, 1000).unwrap();
    assert!(r.passed, "{}", r.detail);
    println!("criterion 5 (Mrs. Gerber dominance, 1000 channels): PASS");
}

#[test]
fn criterion_6_equivocation_identity_at_n8() {
    let src = SourcePair::binary_symmetric(0.05).unwrap();
    let aux = SimAux::OneSided(
        achieving_channel_one_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap(),
    );
    for seed in 1..=20u64 {
        let cfg =
            SimConfig::new(8, src.clone(), aux.clone(), 0.3, 0.35, seed, 1).unwrap();
        let code = build_code(&cfg).unwrap();
        let equiv = exact_equivocation(&code, &cfg).unwrap();

        // Independent enumeration of H(m_X) over all 256 sequences.
        let mut bins = std::collections::HashMap::new();
        for idx in 0..256u64 {
            let mut seq = vec![0u8; 8];
            let mut v = idx;
            for i in (0..8).rev() {
                seq[i] = (v % 2) as u8;
                v /= 2;
            }
            *bins.entry(code.x_bin_of(&seq)).or_insert(0.0f64) += (0.5f64).powi(8);
        }
        let h_j: f64 = bins.values().map(|&p| -p * p.log2()).sum();
        let n_hx = 8.0; // uniform bit
        assert!(
            (equiv * 8.0 - (n_hx - h_j)).abs() <= 1e-12,
            "identity failed at seed {seed}"
        );
        let r_x_used = code.rates().alice_rate(8);
        assert!(
            equiv * 8.0 >= 8.0 * (1.0 - r_x_used) - 1e-12,
            "Slepian-Wolf floor failed at seed {seed}"
        );
    }
    println!("criterion 6 (equivocation identity, 20 codes at n=8): PASS");
}

#[test]
fn criterion_7_random_coding_consistency() {
    let start = Instant::now();
    let src = SourcePair::binary_symmetric(0.05).unwrap();
    let one = SimAux::OneSided(
        achieving_channel_one_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap(),
    );
    let two = SimAux::TwoSided(
        achieving_channels_two_sided(BssSource::new(0.05).unwrap(), 0.5).unwrap(),
    );

    let median = |mut values: Vec<f64>| -> f64 {
        values.sort_by(f64::total_cmp);
        0.5 * (values[values.len() / 2 - 1] + values[values.len() / 2])
    };

    let mut pe_medians = Vec::new();
    for n in [6usize, 10, 14] {
        let pes: Vec<f64> = (1..=20u64)
            .map(|seed| {
                let cfg =
                    SimConfig::new(n, src.clone(), one.clone(), 0.3, 0.35, seed, 100).unwrap();
                run_experiment(&cfg).unwrap().pe_hat
            })
            .collect();
        pe_medians.push(median(pes));
    }
    assert!(
        pe_medians[0] >= pe_medians[1] && pe_medians[1] >= pe_medians[2],
        "medians not nonincreasing: {pe_medians:?}"
    );

    let equiv_of = |aux: &SimAux, seed: u64| {
        let cfg = SimConfig::new(12, src.clone(), aux.clone(), 0.3, 0.35, seed, 1).unwrap();
        run_experiment(&cfg).unwrap().equivocation_per_symbol
    };
    let one_med = median((1..=20u64).map(|s| equiv_of(&one, s)).collect());
    let two_med = median((1..=20u64).map(|s| equiv_of(&two, s)).collect());
    assert!(
        two_med >= one_med,
        "two-sided median equivocation {two_med} below one-sided {one_med}"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "criterion 7 (random-coding consistency: pe medians {pe_medians:?}, \
         equivocation {one_med:.4} ≤ {two_med:.4}, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_8_byte_identical_outputs_at_any_thread_count() {
    let bin = env!("CARGO_BIN_EXE_equivlab");
    let dir = tempfile::tempdir().unwrap();

    let invocations: Vec<Vec<String>> = vec![
        vec![
            "fig4".into(),
            "--delta".into(),
            "0.05".into(),
            "--grid".into(),
            "0.1:1.0:0.1".into(),
        ],
        vec![
            "sweep".into(),
            "--model".into(),
            "two".into(),
            "--source".into(),
            "bss:0.05".into(),
            "--grid".into(),
            "0.25:0.75:0.25".into(),
            "--seed".into(),
            "7".into(),
            "--starts".into(),
            "8".into(),
        ],
        vec![
            "sim".into(),
            "--model".into(),
            "one".into(),
            "--source".into(),
            "bss:0.05".into(),
            "--n".into(),
            "10".into(),
            "--seed".into(),
            "3".into(),
            "--trials".into(),
            "50".into(),
        ],
    ];

    for (k, args) in invocations.iter().enumerate() {
        let mut outputs = Vec::new();
        for (run, threads) in [(0, "1"), (1, "1"), (2, "4"), (3, "0")] {
            let out_path = dir.path().join(format!("out_{k}_{run}.csv"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&out_path)
                .env("EQUIVLAB_THREADS", threads)
                .status()
                .unwrap();
            assert!(status.success(), "{args:?} failed");
            outputs.push(std::fs::read(&out_path).unwrap());
        }
        assert!(
            outputs.windows(2).all(|w| w[0] == w[1]),
            "outputs differ for {args:?}"
        );
    }
    println!("criterion 8 (byte-identical outputs at threads 1/1/4/auto): PASS");
}
