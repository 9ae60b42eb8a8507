//! Closed-form boundary table for a binary symmetric source: the data
//! behind the one-sided vs two-sided comparison plot.
//!
//! ```bash
//! cargo run --release --example closed_form_table
//! ```

use equivlab::binary_analytic::{figure4_table, write_figure4_csv};

fn main() -> equivlab::Result<()> {
    let delta = 0.05;
    let grid: Vec<f64> = (1..=20).map(|k| k as f64 * 0.05).collect();
    let rows = figure4_table(delta, &grid)?;
    let mut out = Vec::new();
    write_figure4_csv(&mut out, delta, &rows)?;
    print!("{}", String::from_utf8(out).expect("CSV is UTF-8"));
    Ok(())
}
