//! The one-time-pad corner of the two-sided region: a helper rate of H(X)
//! buys perfect secrecy.
//!
//! Choosing V uniform and independent of the sources turns the helper link
//! into a key channel; with U = X ⊕ V the formula gives
//! Δ = min(I(X;V|U), R_y) = min(H(X), R_y), so Δ = H(X) once R_y ≥ H(X).
//!
//! ```bash
//! cargo run --release --example perfect_secrecy
//! ```

use equivlab::infomeasures::{CondChannel, Var, VarId};
use equivlab::regions::{eval_theorem2, AuxSystem2, SourcePair};

fn main() -> equivlab::Result<()> {
    let src = SourcePair::binary_symmetric(0.05)?;

    let key = CondChannel::new(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V, 2)],
        vec![0.5, 0.5, 0.5, 0.5],
    )?;
    let pad = CondChannel::deterministic(
        vec![VarId::new(Var::X, 2), VarId::new(Var::V, 2)],
        vec![VarId::new(Var::U, 2)],
        |r| (r / 2) ^ (r % 2),
    )?;
    let aux = AuxSystem2::new(key, pad)?;

    for ry in [0.25, 0.5, 0.75, 1.0, 1.25] {
        let p = eval_theorem2(&src, &aux, ry)?;
        println!(
            "R_y = {ry:.2}: delta = {:.6}  (rx_min = {:.6}, helper rate floor I(Y;V) = {:.6})",
            p.delta_cap, p.rx_min, p.ry_min
        );
    }
    println!("perfect secrecy (delta = H(X) = 1) from R_y = 1 on");
    Ok(())
}
