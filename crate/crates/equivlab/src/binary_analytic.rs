//! Closed-form boundaries for doubly symmetric binary sources.
//!
//! For X = Y ⊕ Ber(δ) with uniform bits and helper rate R_y, Mrs. Gerber's
//! lemma pins the exact boundary of the one-sided region:
//!
//! - R_x ≥ h(δ ∗ h⁻¹(1 − R_y)) and Δ ≤ 1 − h(δ ∗ h⁻¹(1 − R_y)),
//!
//! while the two-sided helper achieves Δ ≤ min(R_y, 1) at the same R_x. The
//! boundary is attained by V = Y ⊕ Ber(α) with α = h⁻¹(1 − R_y), plus
//! U = X ⊕ V for the two-sided model. These formulas are the exact oracle
//! against which the channel optimizer is validated.

use std::io::Write;

use crate::error::{Error, Result};
use crate::infomeasures::{
    binary_convolution, binary_entropy, inv_binary_entropy, CondChannel, Var, VarId,
};
use crate::regions::{AuxSystem1, AuxSystem2, SourcePair};

/// Doubly symmetric binary source: uniform bits with X = Y ⊕ Ber(δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BssSource {
    delta: f64,
}

impl BssSource {
    pub fn new(delta: f64) -> Result<BssSource> {
        if !(0.0..=0.5).contains(&delta) {
            return Err(Error::input(format!("crossover {delta} outside [0, 1/2]")));
        }
        Ok(BssSource { delta })
    }

    pub fn delta(self) -> f64 {
        self.delta
    }

    pub fn to_source_pair(self) -> SourcePair {
        SourcePair::binary_symmetric(self.delta).expect("delta validated at construction")
    }
}

/// Mrs. Gerber's lemma bound h(δ ∗ h⁻¹(β)): the minimum of H(X|V) over all
/// V with H(Y|V) ≥ β when X = Y ⊕ Ber(δ).
pub fn mgl_bound(delta: f64, beta: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(Error::input(format!("crossover {delta} outside [0, 1/2]")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::input(format!("entropy {beta} outside [0, 1]")));
    }
    binary_entropy(binary_convolution(delta, inv_binary_entropy(beta)?)?)
}

/// One-sided boundary at helper rate `ry`: (rx_min, delta_max) with
/// delta_max = 1 − rx_min. Rates beyond H(Y) = 1 are clamped: a helper
/// cannot convey more than H(Y) to the one-sided decoder.
pub fn one_sided_boundary(src: BssSource, ry: f64) -> Result<(f64, f64)> {
    if ry < 0.0 {
        return Err(Error::input(format!("negative helper rate {ry}")));
    }
    let rx = mgl_bound(src.delta, 1.0 - ry.min(1.0))?;
    Ok((rx, 1.0 - rx))
}

/// Two-sided boundary at helper rate `ry`: the same rx_min but
/// delta_max = min(ry, 1), reaching perfect secrecy at ry ≥ H(Y).
pub fn two_sided_boundary(src: BssSource, ry: f64) -> Result<(f64, f64)> {
    if ry < 0.0 {
        return Err(Error::input(format!("negative helper rate {ry}")));
    }
    let rx = mgl_bound(src.delta, 1.0 - ry.min(1.0))?;
    Ok((rx, ry.min(1.0)))
}

fn crossover_for_rate(ry: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&ry) {
        return Err(Error::input(format!(
            "helper rate {ry} outside [0, 1]; clip to min(ry, 1) at the call site"
        )));
    }
    inv_binary_entropy(1.0 - ry)
}

/// Boundary-achieving helper channel V = Y ⊕ Ber(α), α = h⁻¹(1 − ry).
pub fn achieving_channel_one_sided(src: BssSource, ry: f64) -> Result<AuxSystem1> {
    let _ = src;
    let alpha = crossover_for_rate(ry)?;
    AuxSystem1::new(CondChannel::bsc(Var::Y, Var::V, alpha)?)
}

/// Boundary-achieving pair for the two-sided model: the same V plus the
/// deterministic quantizer U = X ⊕ V, which makes I(X;V|U) = H(X) = 1.
pub fn achieving_channels_two_sided(src: BssSource, ry: f64) -> Result<AuxSystem2> {
    let _ = src;
    let alpha = crossover_for_rate(ry)?;
    let v = CondChannel::bsc(Var::Y, Var::V, alpha)?;
    let u = CondChannel::deterministic(
        vec![VarId::new(Var::X, 2), VarId::new(Var::V, 2)],
        vec![VarId::new(Var::U, 2)],
        |r| (r / 2) ^ (r % 2),
    )?;
    AuxSystem2::new(v, u)
}

/// One row of the rate-equivocation comparison table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure4Row {
    pub ry: f64,
    pub rx_min: f64,
    pub delta_one: f64,
    pub delta_two: f64,
}

/// Closed-form one-sided and two-sided boundary values over a helper-rate
/// grid: the data behind the usual comparison plot of the two models.
pub fn figure4_table(delta: f64, ry_grid: &[f64]) -> Result<Vec<Figure4Row>> {
    if ry_grid.is_empty() {
        return Err(Error::input("empty helper-rate grid"));
    }
    if ry_grid.iter().any(|&ry| !(0.0..=1.5).contains(&ry)) {
        return Err(Error::input("helper-rate grid values must lie in [0, 1.5]"));
    }
    let src = BssSource::new(delta)?;
    ry_grid
        .iter()
        .map(|&ry| {
            let (rx_min, delta_one) = one_sided_boundary(src, ry)?;
            let (_, delta_two) = two_sided_boundary(src, ry)?;
            Ok(Figure4Row {
                ry,
                rx_min,
                delta_one,
                delta_two,
            })
        })
        .collect()
}

/// Serialize a figure-4 table as CSV with a δ comment header and fixed
/// 6-decimal values.
pub fn write_figure4_csv(w: &mut impl Write, delta: f64, rows: &[Figure4Row]) -> Result<()> {
    writeln!(w, "# delta={delta:.6}")?;
    writeln!(w, "ry,rx_min,delta_one,delta_two")?;
    for r in rows {
        writeln!(
            w,
            "{:.6},{:.6},{:.6},{:.6}",
            r.ry, r.rx_min, r.delta_one, r.delta_two
        )?;
    }
    Ok(())
}
