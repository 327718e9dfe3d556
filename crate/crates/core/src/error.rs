use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series truncation unavailable at log r = {log_r}: {reason}")]
    TruncationUnavailable { log_r: f64, reason: String },

    #[error("need at least {needed} valid samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("type is undefined for order {rho}")]
    UndefinedForZeroOrder { rho: f64 },

    #[error("construction needs positive finite lower order (lambda = {lambda}, rho = {rho})")]
    UndefinedForZeroLowerOrder { lambda: f64, rho: f64 },

    #[error("need at least {needed} exponents, got {got}")]
    InsufficientExponents { needed: usize, got: usize },

    #[error("growth-curve fit rejected: {0}")]
    FitRejected(String),

    #[error("seed below growth fixed point: log R2 = {log_r2} < log R1 = {log_r1}")]
    SeedTooSmall { log_r1: f64, log_r2: f64 },

    #[error("inequality not satisfied on grid; largest violating log r = {largest_violation}")]
    NotSatisfiedOnGrid { largest_violation: f64 },

    #[error("no root of log L(sigma) - log M(r) on [log r, alpha log r]")]
    NotFound,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("index {index} out of computed range (len {len})")]
    OutOfRange { index: usize, len: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
