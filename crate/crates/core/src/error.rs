//! Error type shared across the crate.

/// Errors produced by construction, evaluation, and integration routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("basis index {0} out of range 0..=7")]
    BasisIndex(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("lambda vector entries must be strictly positive and finite")]
    NonPositiveLambda,

    #[error("rate parameters must be nonnegative (alpha = {alpha}, beta = {beta})")]
    NegativeRate { alpha: f64, beta: f64 },

    #[error("unsupported delay/rate pairing: {0}")]
    IncompatibleRate(String),

    #[error("history lookup at t = {t} is beyond the stored grid end {end}")]
    HistoryOutOfRange { t: f64, end: f64 },

    #[error("state became non-finite at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("activation produced a non-finite value")]
    NonFiniteActivation,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
