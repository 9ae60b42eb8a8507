//! Exact equivocation accounting for a binning code.
//!
//! The eavesdropper sees Alice's bin index m_X, a deterministic function
//! of x^n, so H(X^n | m_X) = H(X^n) − H(m_X) and everything is computable
//! by enumeration. Structured bin maps make the numbers exact fractions:
//! uniform bits into perfectly balanced 2^5 bins at n = 8 leave exactly
//! (8 − 5)/8 bits per symbol of uncertainty.
//!
//! ```bash
//! cargo run --release --example exact_equivocation
//! ```

use equivlab::binary_analytic::{achieving_channel_one_sided, BssSource};
use equivlab::binning::{build_code, exact_equivocation, BinMap, SimAux, SimConfig};
use equivlab::regions::SourcePair;

fn main() -> equivlab::Result<()> {
    let aux = SimAux::OneSided(achieving_channel_one_sided(BssSource::new(0.05)?, 0.5)?);
    let cfg = SimConfig::new(
        8,
        SourcePair::binary_symmetric(0.05)?,
        aux,
        0.3,
        0.35,
        1,
        1,
    )?;

    let code = build_code(&cfg)?;
    println!(
        "seeded bins ({} bins, rate {:.4} b/sym): equivocation = {:.6}",
        code.x_bin_map().bins(),
        code.rates().alice_rate(8),
        exact_equivocation(&code, &cfg)?
    );
    // Slepian-Wolf floor: H(X) − R_x_used.
    println!(
        "  floor H(X) − R_x_used = {:.6}",
        1.0 - code.rates().alice_rate(8)
    );

    for (bins, label) in [
        (1u64, "single bin (R_x = 0)"),
        (32, "balanced 2^5 bins"),
        (256, "singleton bins (R_x = log|X|)"),
    ] {
        let structured = build_code(&cfg)?.with_x_bin_map(BinMap::Modulo { bins });
        println!(
            "{label}: equivocation = {:.6}",
            exact_equivocation(&structured, &cfg)?
        );
    }
    Ok(())
}
