use thiserror::Error;

/// Errors produced by operator construction, estimation, and recovery routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("ambient dimension must be at least 1")]
    EmptyDimension,
    #[error("invalid sample set: {0}")]
    InvalidSampleSet(String),
    #[error("dense path refused: n = {n} exceeds limit {limit}")]
    DenseLimitExceeded { n: usize, limit: usize },
    #[error("enumeration budget exceeded: {required} supports > budget {budget}")]
    EnumerationBudgetExceeded { required: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vector is outside the s-sparse unit ball: {0}")]
    OutsideSparseBall(String),
    #[error("imaginary residue {residue:.3e} exceeds tolerance {tolerance:.3e} after inverse transform")]
    TransformResidue { residue: f64, tolerance: f64 },
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
