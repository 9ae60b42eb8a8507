//! Sweep the optimized boundary over a helper-rate grid and emit the CSV
//! the `sweep` subcommand writes.
//!
//! ```bash
//! cargo run --release --example boundary_sweep
//! ```

use equivlab::regions::{
    sweep, write_sweep_csv, Model, OptimizeOpts, SourcePair, SweepOpts, SweepSource,
};

fn main() -> equivlab::Result<()> {
    let src = SweepSource::Pair(SourcePair::binary_symmetric(0.05)?);
    let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
    let opts = SweepOpts {
        optimize: OptimizeOpts {
            starts: 16,
            ..OptimizeOpts::default()
        },
        rins_budget: 0.0,
    };

    for model in [Model::OneSided, Model::TwoSided] {
        let points = sweep(model, &src, &grid, &opts)?;
        let mut out = Vec::new();
        write_sweep_csv(&mut out, model, opts.optimize.seed, "bss:0.05", &grid, &points)?;
        print!("{}", String::from_utf8(out).expect("CSV is UTF-8"));
    }
    Ok(())
}
