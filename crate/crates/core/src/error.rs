use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("series has zero constant term and is not invertible")]
    NotInvertible,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("table too short: index {needed} requested, table covers 0..={have}")]
    InsufficientTable { needed: usize, have: usize },

    #[error("truncation too small: need coefficients up to q^{needed}, have q^{have}")]
    Truncation { needed: usize, have: usize },

    #[error("eigenvalues not separated: {0}")]
    Degenerate(String),

    #[error("E_{v}({n},0) vanished")]
    LemmaViolation { v: u32, n: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision infeasible: {0}")]
    PrecisionInfeasible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
