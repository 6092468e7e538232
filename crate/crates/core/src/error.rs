use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field size {0}: expected a prime or 2^m, at most 65536")]
    UnsupportedField(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("element {elem} is outside GF({q})")]
    ElementOutOfRange { elem: u32, q: u32 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotErgodic { iterations: usize, residual: f64 },

    #[error("covariance is not positive definite even with jitter {jitter:e}")]
    Cholesky { jitter: f64 },

    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    CapExceeded { size: u128, cap: u64 },

    #[error("operation is not supported for this source: {0}")]
    Unsupported(String),

    #[error("no alpha in (0, 0.5) satisfies the selection rule: {0}")]
    NoFeasibleAlpha(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
