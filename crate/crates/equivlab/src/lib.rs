//! equivlab: secure lossless source coding with rate-limited helpers.
//!
//! A workbench for the three rate-equivocation regions that arise when Alice
//! must transmit a source X losslessly to Bob over a public link while a
//! helper observing a correlated source Y assists over rate-limited links:
//!
//! - **one-sided helper** — the helper's coded output reaches Bob only;
//!   Slepian-Wolf binning at Alice is optimal and the leaked information
//!   equals the information Alice sends.
//! - **two-sided helper** — Alice also sees the helper's output and can
//!   quantize (X, V) into an auxiliary U, lowering the leakage below the
//!   one-sided value at the same rates, up to perfect secrecy.
//! - **secure + insecure links** — the helper splits its description across
//!   a secure and a public link, with extra side information W at Bob and Z
//!   at the eavesdropper.
//!
//! The crate provides four layers:
//!
//! - [`infomeasures`]: exact finite-alphabet entropy/information kernel and
//!   the binary entropy function family.
//! - [`regions`]: evaluate the three regions for explicit auxiliary channels
//!   and optimize them over channels under cardinality caps.
//! - [`binary_analytic`]: closed-form boundaries for doubly symmetric binary
//!   sources via Mrs. Gerber's lemma — the exact oracle for the optimizer.
//! - [`binning`]: executable random-binning achievability schemes at small
//!   blocklength with Monte Carlo error rates and exact equivocation.
//!
//! Start with the runnable programs under `examples/`; the `equivlab` binary
//! wraps region sweeps, closed-form tables, simulations and self-checks for
//! shell use.

pub mod binary_analytic;
pub mod binning;
pub mod check;
pub mod cli;
pub mod error;
pub mod infomeasures;
pub mod regions;
pub mod rng;

pub use error::{Error, Result};

use std::sync::OnceLock;

/// Environment variable capping the worker-thread count (0 or unset = auto).
pub const THREADS_ENV: &str = "EQUIVLAB_THREADS";

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

/// The shared worker pool. Sized from `EQUIVLAB_THREADS` on first use.
/// All results are reduced in deterministic work-item order, so the thread
/// count never changes any output.
pub fn thread_pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV)
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .unwrap_or(0);
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build worker pool")
    })
}
