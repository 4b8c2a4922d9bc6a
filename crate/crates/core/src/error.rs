use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unitary: defect {defect:e} exceeds tolerance {tolerance:e}")]
    NonUnitaryInput { defect: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("perturbation kind `{found}` not accepted here (expected `{expected}`)")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("digital family for p = {p} iterations would hold 2^{p} matrices (limit p <= {max})")]
    FamilyTooLarge { p: usize, max: usize },

    #[error("{function} is undefined at {value}")]
    DomainError { function: &'static str, value: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("angle is undefined for a zero vector")]
    ZeroVector,

    #[error("at least 2 matrices are required, got {0}")]
    TooFewMatrices(usize),

    #[error("eigensolver failed to converge for a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
