//! Channel optimizer against the exact closed form.
//!
//! The optimizer only ever reports certificates — auxiliary channels whose
//! evaluation proves the point achievable — so it can fall short of the
//! boundary but never cross it. On binary symmetric sources the closed
//! form is exact, which makes the gap directly measurable.
//!
//! ```bash
//! cargo run --release --example optimize_boundary
//! ```

use equivlab::binary_analytic::{one_sided_boundary, two_sided_boundary, BssSource};
use equivlab::regions::{optimize_theorem1, optimize_theorem2, OptimizeOpts, SourcePair};

fn main() -> equivlab::Result<()> {
    let bss = BssSource::new(0.05)?;
    let src = SourcePair::binary_symmetric(0.05)?;
    let opts = OptimizeOpts::default();

    println!("one-sided helper, delta = I(X;V) maximized over p(v|y):");
    println!("  R_y    optimizer   closed form   gap");
    for k in [2, 4, 6, 8, 10] {
        let budget = k as f64 / 10.0;
        let found = optimize_theorem1(&src, budget, &opts)?;
        let (_, exact) = one_sided_boundary(bss, budget)?;
        println!(
            "  {budget:.1}    {:.6}    {:.6}     {:+.2e}",
            found.point.delta_cap,
            exact,
            found.point.delta_cap - exact
        );
    }

    println!("two-sided helper, delta = min(I(X;V|U), R_y) over p(v|y), p(u|x,v):");
    println!("  R_y    optimizer   closed form   gap");
    for k in [2, 4, 6, 8, 10] {
        let budget = k as f64 / 10.0;
        let found = optimize_theorem2(&src, budget, &opts)?;
        let (_, exact) = two_sided_boundary(bss, budget)?;
        println!(
            "  {budget:.1}    {:.6}    {:.6}     {:+.2e}",
            found.point.delta_cap,
            exact,
            found.point.delta_cap - exact
        );
    }
    Ok(())
}
