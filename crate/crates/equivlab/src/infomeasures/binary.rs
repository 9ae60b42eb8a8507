//! Binary entropy function, its inverse on [0, 1/2], and the binary
//! convolution a∗b = a(1−b) + b(1−a).

use crate::error::{Error, Result};

/// h(p) = −p log₂ p − (1−p) log₂ (1−p), in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-(p * p.log2()) - (1.0 - p) * (1.0 - p).log2())
}

/// Inverse of [`binary_entropy`] on the monotone branch [0, 1/2].
///
/// Bisection; unconditionally convergent, the returned p̂ satisfies
/// |h(p̂) − h| ≤ 1e-12 and is within one ulp of the true preimage.
pub fn inv_binary_entropy(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::input(format!("entropy {h} outside [0, 1]")));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-16 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid)? < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Crossover probability of two cascaded binary symmetric channels.
pub fn binary_convolution(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::input(format!(
            "convolution arguments ({a}, {b}) outside [0, 1]"
        )));
    }
    Ok(a * (1.0 - b) + b * (1.0 - a))
}
