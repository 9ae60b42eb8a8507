//! Boundary sweeps: one optimized operating point per budget grid value.
//!
//! Each grid point is warm-started with the previous optimum, which makes
//! the reported equivocation nondecreasing in the budget: the previous
//! certificate stays feasible once the budget grows, so the maximum can only
//! move up.
//!
//! A row reports one corner of the region: the maximum equivocation at the
//! budget, with rx_min taken from the cheapest near-optimal certificate
//! (for the two-sided model the same V need not span the whole Pareto
//! surface between the min-rate and max-equivocation corners).

use std::io::Write;

use super::optimize::{
    optimize_theorem1_with, optimize_theorem2_with, optimize_theorem3_with, OptimizeOpts,
};
use super::{Model, RegionPoint, SecInsSource, SourcePair};
use crate::error::{Error, Result};

/// Source argument for [`sweep`]; the secure/insecure model accepts a plain
/// pair source by attaching constant side information.
#[derive(Debug, Clone)]
pub enum SweepSource {
    Pair(SourcePair),
    SecIns(SecInsSource),
}

/// Sweep options: optimizer settings plus the fixed insecure-link budget
/// used when sweeping the secure/insecure model over its secure rate.
#[derive(Debug, Clone, Default)]
pub struct SweepOpts {
    pub optimize: OptimizeOpts,
    pub rins_budget: f64,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::input("empty budget grid"));
    }
    if grid[0] < 0.0 {
        return Err(Error::input("budget grid must be nonnegative"));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::input("budget grid must be strictly increasing"));
    }
    Ok(())
}

/// Optimize one region point per grid budget.
pub fn sweep(
    model: Model,
    src: &SweepSource,
    grid: &[f64],
    opts: &SweepOpts,
) -> Result<Vec<RegionPoint>> {
    check_grid(grid)?;
    let mut points = Vec::with_capacity(grid.len());
    match (model, src) {
        (Model::OneSided, SweepSource::Pair(pair)) => {
            let mut warm = Vec::new();
            for &budget in grid {
                let out = optimize_theorem1_with(pair, budget, &opts.optimize, &warm)?;
                warm = vec![out.aux];
                points.push(out.point);
            }
        }
        (Model::TwoSided, SweepSource::Pair(pair)) => {
            let mut warm = Vec::new();
            for &budget in grid {
                let out = optimize_theorem2_with(pair, budget, &opts.optimize, &warm)?;
                warm = vec![out.aux];
                points.push(out.point);
            }
        }
        (Model::SecIns, src) => {
            let owned;
            let sec_src = match src {
                SweepSource::SecIns(s) => s,
                SweepSource::Pair(pair) => {
                    owned = SecInsSource::without_side_information(pair)?;
                    &owned
                }
            };
            let mut warm = Vec::new();
            for &budget in grid {
                let out = optimize_theorem3_with(
                    sec_src,
                    budget,
                    opts.rins_budget,
                    &opts.optimize,
                    &warm,
                )?;
                warm = vec![out.aux];
                points.push(out.point);
            }
        }
        (m, SweepSource::SecIns(_)) => {
            return Err(Error::input(format!(
                "model `{m}` sweeps need an (X, Y) source, not a secure/insecure one"
            )));
        }
    }
    Ok(points)
}

/// Write sweep output as CSV: a comment line naming model, seed and source,
/// a header, then one fixed-6-decimal row per grid point.
pub fn write_sweep_csv(
    w: &mut impl Write,
    model: Model,
    seed: u64,
    source_desc: &str,
    grid: &[f64],
    points: &[RegionPoint],
) -> Result<()> {
    writeln!(w, "# model={} seed={} source={}", model.tag(), seed, source_desc)?;
    writeln!(w, "r_budget,rx_min,ry_min,delta_cap")?;
    for (budget, p) in grid.iter().zip(points) {
        writeln!(
            w,
            "{budget:.6},{:.6},{:.6},{:.6}",
            p.rx_min, p.ry_min, p.delta_cap
        )?;
    }
    Ok(())
}
