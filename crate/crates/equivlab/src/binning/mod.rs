//! Executable random-binning achievability schemes at small blocklength.
//!
//! The helper draws a rate-distortion codebook of 2^⌈n(I(V;Y)+margin)⌉
//! v-sequences i.i.d. from p(v) and sends the index of the first codeword
//! jointly typical with its observation. Alice bins her source sequences
//! pseudorandomly; in the two-sided scheme she additionally quantizes
//! (x, v) to a u-codeword of a 2^⌈n(I(X,V;U)+margin)⌉ codebook binned at
//! rate I(X;U|V), and bins x at the smaller rate H(X|U,V). Bob recovers x
//! by joint-typicality search inside the received bins.
//!
//! All randomness is a pure function of the configuration seed: codebooks
//! come from per-purpose ChaCha streams and bin maps are keyed pseudorandom
//! functions evaluated lazily per sequence, so no bin table is ever
//! materialized. Monte Carlo error estimates live in [`run_experiment`];
//! the per-symbol equivocation of a code is computed exactly, by
//! enumeration, in [`exact_equivocation`].

mod equivocation;
mod experiment;
pub mod typicality;

pub use equivocation::exact_equivocation;
pub use experiment::{run_experiment, SimReport};
pub use typicality::{jointly_typical, typical};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::infomeasures::{JointDist, Var};
use crate::regions::{AuxSystem1, AuxSystem2, Model, SourcePair};
use crate::rng::{derive_key, prf64, stream_rng};

/// Exact equivocation enumerates |X|^n (one-sided) or (|X||Y|)^n
/// (two-sided) sequences; configurations beyond 2^24 are rejected.
pub const ENUM_GUARD_BITS: f64 = 24.0;

/// Codebooks are materialized; cap their size.
const CODEBOOK_GUARD: u64 = 1 << 26;

/// Bin counts stay abstract (keyed PRF), but must fit in a u64 shift.
const BIN_BITS_GUARD: u32 = 48;

const STREAM_V_CODEBOOK: u64 = 1;
const STREAM_U_CODEBOOK: u64 = 2;
pub(crate) const STREAM_TRIAL_BASE: u64 = 16;

/// Auxiliary system driving a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum SimAux {
    OneSided(AuxSystem1),
    TwoSided(AuxSystem2),
}

impl SimAux {
    pub fn model(&self) -> Model {
        match self {
            SimAux::OneSided(_) => Model::OneSided,
            SimAux::TwoSided(_) => Model::TwoSided,
        }
    }
}

/// Configuration of one simulated code.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub source: SourcePair,
    pub aux: SimAux,
    /// Bits per symbol added to every codebook/bin exponent.
    pub rate_margin: f64,
    /// Multiplicative typicality slack (0.35 is a workable default at
    /// n ≤ 16).
    pub typ_eps: f64,
    pub seed: u64,
    pub trials: usize,
}

impl SimConfig {
    pub fn new(
        n: usize,
        source: SourcePair,
        aux: SimAux,
        rate_margin: f64,
        typ_eps: f64,
        seed: u64,
        trials: usize,
    ) -> Result<SimConfig> {
        if n == 0 {
            return Err(Error::input("blocklength must be at least 1"));
        }
        if typ_eps <= 0.0 {
            return Err(Error::input("typicality slack must be positive"));
        }
        if trials == 0 {
            return Err(Error::input("at least one trial is required"));
        }
        if !(0.0..=8.0).contains(&rate_margin) {
            return Err(Error::input("rate margin must lie in [0, 8] bits"));
        }
        let enum_cells = match aux {
            SimAux::OneSided(_) => source.x_card(),
            SimAux::TwoSided(_) => source.x_card() * source.y_card(),
        };
        let enum_bits = n as f64 * (enum_cells as f64).log2();
        if enum_bits > ENUM_GUARD_BITS + 1e-9 {
            return Err(Error::resource(format!(
                "exact equivocation would enumerate 2^{enum_bits:.1} sequences (guard 2^24)"
            )));
        }
        Ok(SimConfig {
            n,
            source,
            aux,
            rate_margin,
            typ_eps,
            seed,
            trials,
        })
    }

    pub fn model(&self) -> Model {
        self.aux.model()
    }
}

/// Deterministic total map from sequence indices to bin indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinMap {
    /// Keyed pseudorandom assignment, uniform over a power-of-two bin count.
    Seeded { key: u64, bins: u64 },
    /// idx mod bins; perfectly balanced when bins divides the sequence
    /// count. Used by oracle experiments, not by [`build_code`].
    Modulo { bins: u64 },
}

impl BinMap {
    pub fn bins(&self) -> u64 {
        match *self {
            BinMap::Seeded { bins, .. } => bins,
            BinMap::Modulo { bins } => bins,
        }
    }

    pub fn assign(&self, idx: u64) -> u64 {
        match *self {
            BinMap::Seeded { key, bins } => prf64(key, idx) & (bins - 1),
            BinMap::Modulo { bins } => idx % bins,
        }
    }
}

/// The exponents a code was built with, for rate accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatesUsed {
    /// I(V;Y), the helper's covering rate.
    pub helper_rate: f64,
    pub helper_bits: u32,
    /// Alice's source-bin rate H(X|V) (one-sided) or H(X|U,V) (two-sided).
    pub x_bin_rate: f64,
    pub x_bin_bits: u32,
    /// I(X,V;U) and I(X;U|V); zero for the one-sided scheme.
    pub u_codebook_rate: f64,
    pub u_codebook_bits: u32,
    pub u_bin_rate: f64,
    pub u_bin_bits: u32,
}

impl RatesUsed {
    /// Total bits Alice transmits per block: m_X plus (two-sided) s_U.
    pub fn alice_bits(&self) -> u32 {
        self.x_bin_bits + self.u_bin_bits
    }

    /// Alice's operational rate in bits per symbol.
    pub fn alice_rate(&self, n: usize) -> f64 {
        self.alice_bits() as f64 / n as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
struct TwoSidedPart {
    u_codebook: Vec<Vec<u8>>,
    u_bins: BinMap,
    /// p(u, v, x): quantization and decode typicality checks.
    dist_uvx: JointDist,
    /// p(u, v): Bob's u-recovery typicality check.
    dist_uv: JointDist,
}

/// A concrete finite-blocklength code, fully determined by its
/// [`SimConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct BinningCode {
    model: Model,
    n: usize,
    x_card: usize,
    y_card: usize,
    v_card: usize,
    helper_codebook: Vec<Vec<u8>>,
    x_bins: BinMap,
    /// p(v, y): helper encoding typicality check.
    dist_vy: JointDist,
    /// p(v, x): Bob's one-sided decode typicality check.
    dist_vx: JointDist,
    two: Option<TwoSidedPart>,
    rates: RatesUsed,
}

/// Message Alice transmits for one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AliceMessage {
    /// Wyner-Ziv bin of the selected u-codeword (two-sided only).
    pub s_u: Option<u64>,
    /// Bin of the source sequence.
    pub m_x: u64,
    /// No u-codeword was jointly typical; the first codeword's bin was
    /// transmitted and the event counts as an encode failure.
    pub u_search_failed: bool,
}

pub(crate) fn seq_index(seq: &[u8], card: usize) -> u64 {
    let mut idx = 0u64;
    for &s in seq {
        idx = idx * card as u64 + s as u64;
    }
    idx
}

pub(crate) fn index_seq(mut idx: u64, card: usize, n: usize, out: &mut Vec<u8>) {
    out.clear();
    out.resize(n, 0);
    for i in (0..n).rev() {
        out[i] = (idx % card as u64) as u8;
        idx /= card as u64;
    }
}

/// ⌈n(rate + margin)⌉ with a 1e-9 slack so rates that are analytically
/// integral do not round up through floating-point noise.
fn exponent_bits(n: usize, rate: f64, margin: f64) -> u32 {
    let v = n as f64 * (rate + margin);
    (v - 1e-9).ceil().max(0.0) as u32
}

fn cdf_of(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }
    cdf
}

pub(crate) fn draw_symbol(rng: &mut ChaCha8Rng, cdf: &[f64]) -> u8 {
    let u = rng.gen::<f64>();
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1) as u8
}

fn draw_codebook(
    rng: &mut ChaCha8Rng,
    count: u64,
    n: usize,
    probs: &[f64],
) -> Result<Vec<Vec<u8>>> {
    if count > CODEBOOK_GUARD {
        return Err(Error::resource(format!(
            "codebook of {count} sequences exceeds the materialization guard"
        )));
    }
    let cdf = cdf_of(probs);
    Ok((0..count)
        .map(|_| (0..n).map(|_| draw_symbol(rng, &cdf)).collect())
        .collect())
}

fn bin_count(bits: u32) -> Result<u64> {
    if bits > BIN_BITS_GUARD {
        return Err(Error::resource(format!(
            "bin exponent {bits} exceeds the 2^{BIN_BITS_GUARD} guard"
        )));
    }
    Ok(1u64 << bits)
}

/// Draw the codebooks and bin maps for `cfg`. The result is a pure function
/// of the configuration (in particular of its seed).
pub fn build_code(cfg: &SimConfig) -> Result<BinningCode> {
    let x_card = cfg.source.x_card();
    let y_card = cfg.source.y_card();
    match &cfg.aux {
        SimAux::OneSided(aux) => {
            let joint = cfg.source.joint().extend(aux.v_channel())?;
            let helper_rate = joint.mutual_info(&[Var::V], &[Var::Y])?;
            let x_rate = joint.cond_entropy(&[Var::X], &[Var::V])?;
            let helper_bits = exponent_bits(cfg.n, helper_rate, cfg.rate_margin);
            let x_bin_bits = exponent_bits(cfg.n, x_rate, cfg.rate_margin);
            let p_v = joint.marginalize(&[Var::V])?;
            let mut rng = stream_rng(cfg.seed, STREAM_V_CODEBOOK);
            let helper_codebook =
                draw_codebook(&mut rng, bin_count(helper_bits)?, cfg.n, p_v.probs())?;
            Ok(BinningCode {
                model: Model::OneSided,
                n: cfg.n,
                x_card,
                y_card,
                v_card: p_v.probs().len(),
                helper_codebook,
                x_bins: BinMap::Seeded {
                    key: derive_key(cfg.seed, 100),
                    bins: bin_count(x_bin_bits)?,
                },
                dist_vy: joint.marginalize(&[Var::V, Var::Y])?,
                dist_vx: joint.marginalize(&[Var::V, Var::X])?,
                two: None,
                rates: RatesUsed {
                    helper_rate,
                    helper_bits,
                    x_bin_rate: x_rate,
                    x_bin_bits,
                    u_codebook_rate: 0.0,
                    u_codebook_bits: 0,
                    u_bin_rate: 0.0,
                    u_bin_bits: 0,
                },
            })
        }
        SimAux::TwoSided(aux) => {
            let joint = cfg
                .source
                .joint()
                .extend(aux.v_channel())?
                .extend(aux.u_channel())?;
            let helper_rate = joint.mutual_info(&[Var::V], &[Var::Y])?;
            let x_rate = joint.cond_entropy(&[Var::X], &[Var::U, Var::V])?;
            let u_codebook_rate = joint.mutual_info(&[Var::X, Var::V], &[Var::U])?;
            let u_bin_rate = joint.cond_mutual_info(&[Var::X], &[Var::U], &[Var::V])?;
            let helper_bits = exponent_bits(cfg.n, helper_rate, cfg.rate_margin);
            let x_bin_bits = exponent_bits(cfg.n, x_rate, cfg.rate_margin);
            let u_codebook_bits = exponent_bits(cfg.n, u_codebook_rate, cfg.rate_margin);
            let u_bin_bits = exponent_bits(cfg.n, u_bin_rate, cfg.rate_margin);
            let p_v = joint.marginalize(&[Var::V])?;
            let p_u = joint.marginalize(&[Var::U])?;
            let mut v_rng = stream_rng(cfg.seed, STREAM_V_CODEBOOK);
            let helper_codebook =
                draw_codebook(&mut v_rng, bin_count(helper_bits)?, cfg.n, p_v.probs())?;
            let mut u_rng = stream_rng(cfg.seed, STREAM_U_CODEBOOK);
            let u_codebook =
                draw_codebook(&mut u_rng, bin_count(u_codebook_bits)?, cfg.n, p_u.probs())?;
            Ok(BinningCode {
                model: Model::TwoSided,
                n: cfg.n,
                x_card,
                y_card,
                v_card: p_v.probs().len(),
                helper_codebook,
                x_bins: BinMap::Seeded {
                    key: derive_key(cfg.seed, 100),
                    bins: bin_count(x_bin_bits)?,
                },
                dist_vy: joint.marginalize(&[Var::V, Var::Y])?,
                dist_vx: joint.marginalize(&[Var::V, Var::X])?,
                two: Some(TwoSidedPart {
                    u_codebook,
                    u_bins: BinMap::Seeded {
                        key: derive_key(cfg.seed, 101),
                        bins: bin_count(u_bin_bits)?,
                    },
                    dist_uvx: joint.marginalize(&[Var::U, Var::V, Var::X])?,
                    dist_uv: joint.marginalize(&[Var::U, Var::V])?,
                }),
                rates: RatesUsed {
                    helper_rate,
                    helper_bits,
                    x_bin_rate: x_rate,
                    x_bin_bits,
                    u_codebook_rate,
                    u_codebook_bits,
                    u_bin_rate,
                    u_bin_bits,
                },
            })
        }
    }
}

impl BinningCode {
    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rates(&self) -> &RatesUsed {
        &self.rates
    }

    pub fn helper_codebook(&self) -> &[Vec<u8>] {
        &self.helper_codebook
    }

    pub fn u_codebook(&self) -> Option<&[Vec<u8>]> {
        self.two.as_ref().map(|t| t.u_codebook.as_slice())
    }

    pub fn x_bin_map(&self) -> &BinMap {
        &self.x_bins
    }

    /// Bin index of a source sequence.
    pub fn x_bin_of(&self, x_seq: &[u8]) -> u64 {
        self.x_bins.assign(seq_index(x_seq, self.x_card))
    }

    /// Replace the source bin map (oracle experiments with structured bins).
    pub fn with_x_bin_map(mut self, map: BinMap) -> BinningCode {
        self.x_bins = map;
        self
    }

    /// Helper encoding: index of the first codeword jointly typical with
    /// the observation, or None when the covering fails.
    pub fn helper_encode(&self, y_seq: &[u8], eps: f64) -> Result<Option<usize>> {
        for (l, v) in self.helper_codebook.iter().enumerate() {
            if jointly_typical(&[v, y_seq], &self.dist_vy, eps)? {
                return Ok(Some(l));
            }
        }
        Ok(None)
    }

    /// Alice's encoder. The one-sided scheme sends the source bin index and
    /// ignores `v_seq`; the two-sided scheme requires the helper codeword
    /// Alice received and additionally quantizes it into a u-bin.
    pub fn alice_encode(
        &self,
        x_seq: &[u8],
        v_seq: Option<&[u8]>,
        eps: f64,
    ) -> Result<AliceMessage> {
        let m_x = self.x_bin_of(x_seq);
        match &self.two {
            None => Ok(AliceMessage {
                s_u: None,
                m_x,
                u_search_failed: false,
            }),
            Some(two) => {
                let v_seq = v_seq.ok_or_else(|| {
                    Error::input("the two-sided encoder needs the helper codeword")
                })?;
                let mut selected = None;
                for (s, u) in two.u_codebook.iter().enumerate() {
                    if jointly_typical(&[u, v_seq, x_seq], &two.dist_uvx, eps)? {
                        selected = Some(s);
                        break;
                    }
                }
                // The atypical event is absorbed into the error probability:
                // transmit the first codeword's bin and count the failure.
                let (idx, failed) = match selected {
                    Some(s) => (s, false),
                    None => (0, true),
                };
                Ok(AliceMessage {
                    s_u: Some(two.u_bins.assign(idx as u64)),
                    m_x,
                    u_search_failed: failed,
                })
            }
        }
    }

    /// Bob's decoder: search the received bin(s) for the unique jointly
    /// typical candidate. Zero or multiple candidates at any stage is a
    /// decode error, returned as None and counted into p_e.
    pub fn bob_decode(
        &self,
        msg: &AliceMessage,
        helper_index: usize,
        eps: f64,
    ) -> Result<Option<Vec<u8>>> {
        let v = &self.helper_codebook[helper_index];
        match &self.two {
            None => self.unique_x_in_bin(msg.m_x, |x_seq| {
                jointly_typical(&[v, x_seq], &self.dist_vx, eps)
            }),
            Some(two) => {
                let s_u = msg
                    .s_u
                    .ok_or_else(|| Error::input("two-sided decode needs the u-bin index"))?;
                let mut u_hat: Option<&Vec<u8>> = None;
                for (s, u) in two.u_codebook.iter().enumerate() {
                    if two.u_bins.assign(s as u64) != s_u {
                        continue;
                    }
                    if jointly_typical(&[u, v], &two.dist_uv, eps)? {
                        if u_hat.is_some() {
                            return Ok(None);
                        }
                        u_hat = Some(u);
                    }
                }
                let Some(u_hat) = u_hat else {
                    return Ok(None);
                };
                self.unique_x_in_bin(msg.m_x, |x_seq| {
                    jointly_typical(&[u_hat, v, x_seq], &two.dist_uvx, eps)
                })
            }
        }
    }

    fn unique_x_in_bin(
        &self,
        m_x: u64,
        mut is_typical: impl FnMut(&[u8]) -> Result<bool>,
    ) -> Result<Option<Vec<u8>>> {
        let total = (self.x_card as u64)
            .checked_pow(self.n as u32)
            .ok_or_else(|| Error::resource("x-sequence space exceeds u64"))?;
        let mut seq = Vec::new();
        let mut found: Option<Vec<u8>> = None;
        for idx in 0..total {
            if self.x_bins.assign(idx) != m_x {
                continue;
            }
            index_seq(idx, self.x_card, self.n, &mut seq);
            if is_typical(&seq)? {
                if found.is_some() {
                    return Ok(None);
                }
                found = Some(seq.clone());
            }
        }
        Ok(found)
    }
}

#[cfg(test)]
mod tests;
