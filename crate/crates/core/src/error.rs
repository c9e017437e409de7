use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("family is linearly dependent")]
    DependentFamily,
    #[error("Δ₀ vanishes")]
    ZeroDelta0,
    #[error("α vanishes")]
    ZeroAlpha,
    #[error("function determinant Φ vanishes")]
    ZeroPhi,
    #[error("zero operator has no symbol")]
    ZeroOperator,
    #[error("dual number with zero body is not invertible")]
    ZeroBody,
    #[error("truncation or localizing element mismatch")]
    TruncationMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
