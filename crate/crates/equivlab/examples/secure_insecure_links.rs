//! The secure/insecure-links model with side information W at Bob and Z at
//! Eve, and its reduction back to the two-sided region.
//!
//! The source satisfies Y → X → (W, Z): Bob sees X through a clean erasure
//! look while Eve sees a noisier one. The equivocation gains I(X;W|U,V2)
//! from Bob's advantage and loses I(X;Z|U,V2) to Eve's.
//!
//! ```bash
//! cargo run --release --example secure_insecure_links
//! ```

use equivlab::infomeasures::{CondChannel, Var, VarId};
use equivlab::regions::{
    eval_theorem3, optimize_theorem3, AuxSystem3, OptimizeOpts, SecInsSource, SourcePair,
};

fn main() -> equivlab::Result<()> {
    let pair = SourcePair::binary_symmetric(0.05)?;

    // W = X with probability 0.9 (else flipped); Z = X with probability 0.6.
    let wz = CondChannel::new(
        vec![VarId::new(Var::X, 2)],
        vec![VarId::new(Var::W, 2), VarId::new(Var::Z, 2)],
        vec![
            0.54, 0.36, 0.06, 0.04, // x = 0: (w,z) = (0,0),(0,1),(1,0),(1,1)
            0.04, 0.06, 0.36, 0.54, // x = 1
        ],
    )?;
    let src = SecInsSource::from_pair(&pair, &wz)?;

    // With U := X every U-conditioned information vanishes: the floor Δ = 0.
    let v12 = CondChannel::deterministic(
        vec![VarId::new(Var::Y, 2)],
        vec![VarId::new(Var::V1, 1), VarId::new(Var::V2, 1)],
        |_| 0,
    )?;
    let u_copy = CondChannel::deterministic(
        vec![
            VarId::new(Var::X, 2),
            VarId::new(Var::V1, 1),
            VarId::new(Var::V2, 1),
        ],
        vec![VarId::new(Var::U, 2)],
        |r| r,
    )?;
    let floor = eval_theorem3(&src, &AuxSystem3::new(v12, u_copy)?, 0.5)?;
    println!(
        "U := X floor: delta = {:.6} at rx_min = {:.6}",
        floor.delta_cap, floor.rx_min
    );

    // Optimize the auxiliaries under a secure budget, no insecure link.
    let opts = OptimizeOpts {
        starts: 24,
        ..OptimizeOpts::default()
    };
    for rsec in [0.25, 0.5, 1.0] {
        let out = optimize_theorem3(&src, rsec, 0.0, &opts)?;
        println!(
            "R_sec = {rsec:.2}, R_ins = 0: delta = {:.6}  rx_min = {:.6}  rsec_min = {:.6}  rins_min = {:.6}",
            out.point.delta_cap,
            out.point.rx_min,
            out.point.ry_min,
            out.point.rins_min.unwrap_or(0.0),
        );
    }

    // Degenerate W, Z, V2 recovers the two-sided region exactly.
    let no_side = SecInsSource::without_side_information(&pair)?;
    let out = optimize_theorem3(&no_side, 0.5, 0.0, &opts)?;
    println!(
        "degenerate side information, R_sec = 0.5: delta = {:.6} (two-sided closed form: 0.5)",
        out.point.delta_cap
    );
    Ok(())
}
