//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by distribution construction, region evaluation and the
/// binning simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is malformed: unknown variable, overlapping
    /// variable sets, dimension mismatch, out-of-range probability, bad grid.
    #[error("invalid input: {0}")]
    Input(String),

    /// A rate constraint of the evaluated region is violated. Carries the
    /// name of the violated bound so callers can report it.
    #[error("constraint violated: {bound} (required ≥ {required}, got {got})")]
    Constraint {
        bound: String,
        required: f64,
        got: f64,
    },

    /// An enumeration or memory guard would be exceeded.
    #[error("resource guard exceeded: {0}")]
    Resource(String),

    /// Text (de)serialization failure.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
