use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be prime, got {0}")]
    NotPrime(u64),

    #[error("dimension {dim} exceeds the supported limit {limit}")]
    DimTooLarge { dim: u64, limit: u64 },

    #[error("cannot invert {value} modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown basis label `{0}` (expected `ddot0` or 0..d-1)")]
    InvalidLabel(String),

    #[error("empty message prior")]
    EmptyPrior,

    #[error("message prior must have {expected} entries, got {actual}")]
    PriorLength { expected: usize, actual: usize },

    #[error("message prior entries must be non-negative with a positive total")]
    InvalidPrior,

    #[error("trial count must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
