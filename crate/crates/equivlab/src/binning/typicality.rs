//! Robust (strong) typicality with multiplicative slack.
//!
//! A tuple of sequences is jointly typical for a joint distribution when,
//! for every symbol tuple a, the empirical frequency satisfies
//! |freq(a) − p(a)| ≤ eps · p(a); in particular tuples of probability zero
//! must not occur. This is the flavor under which the Markov-lemma decoding
//! argument goes through; at the small blocklengths this crate simulates,
//! the count window [n·p(1−eps), n·p(1+eps)] can contain no integer at all
//! for small p, in which case no sequence is typical.

use crate::error::{Error, Result};
use crate::infomeasures::JointDist;

/// Joint typicality of one sequence per variable of `dist`, in the
/// distribution's (canonical) variable order.
pub fn jointly_typical(seqs: &[&[u8]], dist: &JointDist, eps: f64) -> Result<bool> {
    if seqs.len() != dist.vars().len() {
        return Err(Error::input(format!(
            "{} sequences supplied for a {}-variable distribution",
            seqs.len(),
            dist.vars().len()
        )));
    }
    let n = seqs[0].len();
    if seqs.iter().any(|s| s.len() != n) {
        return Err(Error::input("sequence length mismatch"));
    }
    if n == 0 {
        return Err(Error::input("empty sequences"));
    }
    let cards: Vec<usize> = dist.vars().iter().map(|v| v.card).collect();
    let mut counts = vec![0u32; dist.probs().len()];
    for i in 0..n {
        let mut flat = 0usize;
        for (k, seq) in seqs.iter().enumerate() {
            let s = seq[i] as usize;
            if s >= cards[k] {
                return Err(Error::input(format!(
                    "symbol {s} outside alphabet of size {}",
                    cards[k]
                )));
            }
            flat = flat * cards[k] + s;
        }
        counts[flat] += 1;
    }
    let nf = n as f64;
    Ok(dist
        .probs()
        .iter()
        .zip(&counts)
        .all(|(&p, &c)| (c as f64 - nf * p).abs() <= eps * nf * p))
}

/// Typicality of a single sequence against a one-variable distribution.
pub fn typical(seq: &[u8], dist: &JointDist, eps: f64) -> Result<bool> {
    if dist.vars().len() != 1 {
        return Err(Error::input(
            "typical() needs a one-variable distribution; use jointly_typical",
        ));
    }
    jointly_typical(&[seq], dist, eps)
}
