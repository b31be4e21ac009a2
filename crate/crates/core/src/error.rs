use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid effect: {0}")]
    InvalidEffect(String),

    #[error("invalid meter: {0}")]
    InvalidMeter(String),

    #[error("invalid state space: {0}")]
    InvalidStateSpace(String),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not exactly representable: {0}")]
    NotRepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("model error at {pointer}: {reason}")]
    Model { pointer: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
