//! Exact per-symbol equivocation of a binning code, by enumeration.
//!
//! One-sided scheme: Eve sees m_X, a deterministic function of x^n, so
//! H(X^n | m_X) = H(X^n) − H(m_X); the bin-mass distribution is accumulated
//! exactly over all |X|^n sequences. Two-sided scheme: Eve sees
//! J = (s_U, m_X), a deterministic function of (x^n, l(y^n)); enumerating
//! all (x^n, y^n) pairs gives p(x^n, J) exactly and
//! H(X^n | J) = H(X^n) + H(J | X^n) − H(J).
//!
//! Enumeration is partitioned over sequence-index ranges; partial results
//! are merged in index order with compensated accumulation, so the output
//! is bit-identical at any worker-thread count. Cost note: each distinct
//! (x^n, helper index) pair costs one u-codebook scan, so configurations
//! where the helper covering succeeds with many distinct indices are much
//! slower than ones where it fails onto the fallback index.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::infomeasures::Var;
use crate::regions::Model;
use crate::thread_pool;

use super::{index_seq, jointly_typical, BinningCode, SimConfig};

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompSum {
    sum: f64,
    comp: f64,
}

impl CompSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// Exact equivocation H(X^n | Eve's view)/n in bits per symbol.
pub fn exact_equivocation(code: &BinningCode, cfg: &SimConfig) -> Result<f64> {
    if code.n != cfg.n || code.model != cfg.model() {
        return Err(Error::input("code and configuration disagree"));
    }
    let h_x = cfg.source.joint().entropy(&[Var::X])?;
    let n = cfg.n;
    let bits = match code.model {
        Model::OneSided => n as f64 * h_x - one_sided_leak_entropy(code, cfg)?,
        Model::TwoSided => {
            let (h_j, h_j_given_x) = two_sided_leak_entropies(code, cfg)?;
            n as f64 * h_x - h_j + h_j_given_x
        }
        Model::SecIns => return Err(Error::input("no simulator for the secure/insecure model")),
    };
    let per_symbol = bits / n as f64;
    Ok(per_symbol.clamp(0.0, (code.x_card as f64).log2()))
}

/// H(m_X): entropy of the bin index as a function of X^n.
fn one_sided_leak_entropy(code: &BinningCode, cfg: &SimConfig) -> Result<f64> {
    let x_card = code.x_card;
    let n = code.n;
    let p_x = cfg.source.joint().marginalize(&[Var::X])?.probs().to_vec();
    let total = (x_card as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::resource("sequence space exceeds u64"))?;

    // (bin, index) pairs, sorted so equal bins become runs; probabilities
    // are recomputed during the grouped scan to keep memory at 12 B/seq.
    let mut assignment: Vec<(u64, u64)> = thread_pool().install(|| {
        (0..total)
            .into_par_iter()
            .map(|idx| (code.x_bins.assign(idx), idx))
            .collect()
    });
    thread_pool().install(|| assignment.par_sort_unstable());

    let mut h = CompSum::default();
    let mut run_mass = CompSum::default();
    let mut current_bin = u64::MAX;
    let mut seq = Vec::new();
    let flush = |mass: CompSum, h: &mut CompSum| {
        let p = mass.value();
        if p > 0.0 {
            h.add(-p * p.log2());
        }
    };
    for &(bin, idx) in &assignment {
        if bin != current_bin {
            flush(run_mass, &mut h);
            run_mass = CompSum::default();
            current_bin = bin;
        }
        index_seq(idx, x_card, n, &mut seq);
        let mut p = 1.0;
        for &s in &seq {
            p *= p_x[s as usize];
        }
        run_mass.add(p);
    }
    flush(run_mass, &mut h);
    Ok(h.value())
}

/// (H(J), H(J | X^n)) for J = (s_U, m_X).
fn two_sided_leak_entropies(code: &BinningCode, cfg: &SimConfig) -> Result<(f64, f64)> {
    let two = code
        .two
        .as_ref()
        .expect("two-sided code carries its u-part");
    let x_card = code.x_card;
    let y_card = code.y_card;
    let n = code.n;
    let eps = cfg.typ_eps;
    let p_xy = cfg.source.joint().probs().to_vec();
    let x_total = (x_card as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::resource("sequence space exceeds u64"))?;
    let y_total = (y_card as u64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::resource("sequence space exceeds u64"))?;

    // Helper index per y-sequence; covering failure falls back to index 0.
    let l_of_y: Vec<u32> = thread_pool().install(|| {
        (0..y_total)
            .into_par_iter()
            .map(|y_idx| {
                let mut y_seq = Vec::new();
                index_seq(y_idx, y_card, n, &mut y_seq);
                code.helper_encode(&y_seq, eps)
                    .expect("sequences match the code")
                    .unwrap_or(0) as u32
            })
            .collect()
    });

    struct PerX {
        m_x: u64,
        p_x: f64,
        by_s_u: Vec<(u64, f64)>,
    }

    let per_x: Vec<PerX> = thread_pool().install(|| {
        (0..x_total)
            .into_par_iter()
            .map(|x_idx| {
                let mut x_seq = Vec::new();
                index_seq(x_idx, x_card, n, &mut x_seq);
                let m_x = code.x_bins.assign(x_idx);
                let mut s_u_of_l: BTreeMap<u32, u64> = BTreeMap::new();
                let mut mass: BTreeMap<u64, CompSum> = BTreeMap::new();
                let mut p_x = CompSum::default();
                let mut y_seq = Vec::new();
                for y_idx in 0..y_total {
                    index_seq(y_idx, y_card, n, &mut y_seq);
                    let mut w = 1.0;
                    for (&xs, &ys) in x_seq.iter().zip(&y_seq) {
                        w *= p_xy[xs as usize * y_card + ys as usize];
                    }
                    if w == 0.0 {
                        continue;
                    }
                    let l = l_of_y[y_idx as usize];
                    let s_u = *s_u_of_l.entry(l).or_insert_with(|| {
                        let v = &code.helper_codebook[l as usize];
                        let mut selected = 0u64;
                        for (s, u) in two.u_codebook.iter().enumerate() {
                            if jointly_typical(&[u, v, &x_seq], &two.dist_uvx, eps)
                                .expect("sequences match the code")
                            {
                                selected = s as u64;
                                break;
                            }
                        }
                        two.u_bins.assign(selected)
                    });
                    p_x.add(w);
                    mass.entry(s_u).or_default().add(w);
                }
                PerX {
                    m_x,
                    p_x: p_x.value(),
                    by_s_u: mass.into_iter().map(|(k, v)| (k, v.value())).collect(),
                }
            })
            .collect()
    });

    // Deterministic merge in x-index order.
    let mut joint_mass: BTreeMap<(u64, u64), CompSum> = BTreeMap::new();
    let mut h_given = CompSum::default();
    for px in &per_x {
        for &(s_u, q) in &px.by_s_u {
            joint_mass.entry((s_u, px.m_x)).or_default().add(q);
            if q > 0.0 && px.p_x > 0.0 {
                h_given.add(q * (px.p_x / q).log2());
            }
        }
    }
    let mut h_j = CompSum::default();
    for mass in joint_mass.into_values() {
        let p = mass.value();
        if p > 0.0 {
            h_j.add(-p * p.log2());
        }
    }
    Ok((h_j.value(), h_given.value()))
}
