//! Monte Carlo harness: run i.i.d. source blocks through a code, estimate
//! the decoding error probability, and attach the code's exact equivocation.

use rayon::prelude::*;

use crate::error::Result;
use crate::regions::Model;
use crate::rng::stream_rng;
use crate::thread_pool;

use super::{build_code, draw_symbol, exact_equivocation, SimConfig, STREAM_TRIAL_BASE};

/// z for a 95% binomial (Wilson) interval.
const Z95: f64 = 1.959_963_984_540_054;

/// Result of one simulated code: error estimate with a 95% Wilson interval,
/// exact per-symbol equivocation, and encode-failure accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub model: Model,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub rate_margin: f64,
    pub typ_eps: f64,
    pub pe_hat: f64,
    pub pe_lo: f64,
    pub pe_hi: f64,
    pub equivocation_per_symbol: f64,
    pub helper_encode_failure_rate: f64,
    pub u_encode_failure_rate: f64,
    pub rates_used: super::RatesUsed,
}

impl SimReport {
    pub const CSV_HEADER: &'static str =
        "model,n,seed,trials,margin,eps,pe_hat,pe_lo,pe_hi,equiv_per_symbol,helper_fail_rate";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
            self.model.tag(),
            self.n,
            self.seed,
            self.trials,
            self.rate_margin,
            self.typ_eps,
            self.pe_hat,
            self.pe_lo,
            self.pe_hi,
            self.equivocation_per_symbol,
            self.helper_encode_failure_rate,
        )
    }
}

fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Build the seed-determined code, push `cfg.trials` i.i.d. blocks through
/// encoder and decoder, and compute the exact equivocation once.
pub fn run_experiment(cfg: &SimConfig) -> Result<SimReport> {
    let code = build_code(cfg)?;
    let y_card = cfg.source.y_card();
    let pair_cdf: Vec<f64> = {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = cfg
            .source
            .joint()
            .probs()
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
    };

    struct TrialOutcome {
        error: bool,
        helper_failed: bool,
        u_failed: bool,
    }

    let outcomes: Vec<TrialOutcome> = thread_pool().install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(cfg.seed, STREAM_TRIAL_BASE + t as u64);
                let mut x_seq = Vec::with_capacity(cfg.n);
                let mut y_seq = Vec::with_capacity(cfg.n);
                for _ in 0..cfg.n {
                    let cell = draw_symbol(&mut rng, &pair_cdf) as usize;
                    x_seq.push((cell / y_card) as u8);
                    y_seq.push((cell % y_card) as u8);
                }
                let found = code
                    .helper_encode(&y_seq, cfg.typ_eps)
                    .expect("sequences match the code");
                // Covering failure transmits the first codeword and is
                // absorbed into the error probability.
                let l = found.unwrap_or(0);
                let v_seq = match code.model() {
                    Model::TwoSided => Some(code.helper_codebook()[l].clone()),
                    _ => None,
                };
                let msg = code
                    .alice_encode(&x_seq, v_seq.as_deref(), cfg.typ_eps)
                    .expect("sequences match the code");
                let decoded = code
                    .bob_decode(&msg, l, cfg.typ_eps)
                    .expect("message matches the code");
                TrialOutcome {
                    error: decoded.as_deref() != Some(&x_seq[..]),
                    helper_failed: found.is_none(),
                    u_failed: msg.u_search_failed,
                }
            })
            .collect()
    });

    let errors = outcomes.iter().filter(|o| o.error).count();
    let helper_failures = outcomes.iter().filter(|o| o.helper_failed).count();
    let u_failures = outcomes.iter().filter(|o| o.u_failed).count();
    let (pe_lo, pe_hi) = wilson_interval(errors, cfg.trials);

    Ok(SimReport {
        model: cfg.model(),
        n: cfg.n,
        seed: cfg.seed,
        trials: cfg.trials,
        rate_margin: cfg.rate_margin,
        typ_eps: cfg.typ_eps,
        pe_hat: errors as f64 / cfg.trials as f64,
        pe_lo,
        pe_hi,
        equivocation_per_symbol: exact_equivocation(&code, cfg)?,
        helper_encode_failure_rate: helper_failures as f64 / cfg.trials as f64,
        u_encode_failure_rate: u_failures as f64 / cfg.trials as f64,
        rates_used: *code.rates(),
    })
}
