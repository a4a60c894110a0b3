use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid neighborhood system: {0}")]
    InvalidNeighborhoods(String),

    #[error("enumeration budget exceeded: need {needed} cases, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("subset enumeration cap exceeded: |V| = {size} > cap {cap}")]
    SubsetCapExceeded { size: usize, cap: usize },

    #[error("invalid operator expression: {0}")]
    InvalidExpression(String),

    #[error("invalid scaling map: {0}")]
    InvalidPhi(String),

    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(String),

    #[error("value left the exact-representable class: {0}")]
    Unrepresentable(String),

    #[error("comparison undecidable at configured precision: {0}")]
    Undecidable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing table entry for {0}")]
    MissingTableEntry(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
