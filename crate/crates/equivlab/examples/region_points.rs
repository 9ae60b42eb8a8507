//! Evaluate the one-sided and two-sided regions at explicit auxiliary
//! channels on a binary symmetric source.
//!
//! ```bash
//! cargo run --release --example region_points
//! ```

use equivlab::infomeasures::{CondChannel, Var, VarId};
use equivlab::regions::{eval_theorem1, eval_theorem2, AuxSystem1, AuxSystem2, SourcePair};

fn main() -> equivlab::Result<()> {
    let src = SourcePair::binary_symmetric(0.05)?;

    // A useless helper: V constant. Alice must send H(X) = 1 bit/symbol and
    // everything she sends leaks.
    let constant = AuxSystem1::new(CondChannel::constant(
        vec![VarId::new(Var::Y, 2)],
        VarId::new(Var::V, 1),
        0,
    )?)?;
    let p = eval_theorem1(&src, &constant)?;
    println!(
        "constant V : rx_min={:.6}  ry_min={:.6}  delta={:.6}",
        p.rx_min, p.ry_min, p.delta_cap
    );

    // Full-rate helper: V = Y. Alice's rate drops to H(X|Y) = h(0.05) and
    // the eavesdropper's uncertainty rises to I(X;Y).
    let identity = AuxSystem1::new(CondChannel::identity(VarId::new(Var::Y, 2), Var::V)?)?;
    let p = eval_theorem1(&src, &identity)?;
    println!(
        "V = Y      : rx_min={:.6}  ry_min={:.6}  delta={:.6}",
        p.rx_min, p.ry_min, p.delta_cap
    );

    // Rate-limited helper: V = Y ⊕ Ber(0.11), roughly half a bit of helper
    // rate.
    let bsc = AuxSystem1::new(CondChannel::bsc(Var::Y, Var::V, 0.11)?)?;
    let p1 = eval_theorem1(&src, &bsc)?;
    println!(
        "V = BSC(Y) : rx_min={:.6}  ry_min={:.6}  delta={:.6}",
        p1.rx_min, p1.ry_min, p1.delta_cap
    );

    // Same helper, two-sided: Alice also sees V and quantizes with
    // U = X ⊕ V. The equivocation jumps from I(X;V) to min(I(X;V|U), R_y).
    let xor_u = CondChannel::deterministic(
        vec![VarId::new(Var::X, 2), VarId::new(Var::V, 2)],
        vec![VarId::new(Var::U, 2)],
        |r| (r / 2) ^ (r % 2),
    )?;
    let aux2 = AuxSystem2::new(CondChannel::bsc(Var::Y, Var::V, 0.11)?, xor_u)?;
    let p2 = eval_theorem2(&src, &aux2, p1.ry_min)?;
    println!(
        "  + U = X⊕V: rx_min={:.6}  ry_min={:.6}  delta={:.6}",
        p2.rx_min, p2.ry_min, p2.delta_cap
    );
    println!(
        "two-sided gain at the same rates: {:.6} bits/symbol",
        p2.delta_cap - p1.delta_cap
    );
    Ok(())
}
