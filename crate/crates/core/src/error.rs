use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator and the analysis toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected} samples, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("spectrum is not conjugate-symmetric (max defect {defect:.3e})")]
    NotConjugateSymmetric { defect: f64 },

    #[error("unsupported norm exponent {0}; expected 1, 2 or infinity")]
    UnsupportedNorm(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("g is not non-decreasing: g({left}) = {left_value} > g({right}) = {right_value}")]
    MonotonicityViolation {
        left: f64,
        left_value: f64,
        right: f64,
        right_value: f64,
    },

    #[error("field has spectral content outside the required support: {0}")]
    SupportViolation(String),

    #[error("incompatible Hoelder exponents: {0}")]
    IncompatibleExponents(String),

    #[error("non-finite coefficient encountered at t = {time}")]
    BlowUp { time: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed series: {0}")]
    Series(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
