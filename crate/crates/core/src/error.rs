use thiserror::Error;

/// Errors produced by the library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum QopError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max |A - A^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("channel is not completely positive (min chi eigenvalue = {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("invalid operator basis: {0}")]
    InvalidBasis(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("ideal chi-matrix is not rank one (residual weight {residual:e})")]
    NotRankOne { residual: f64 },

    #[error("size guard exceeded: matrix dimension {requested} > cap {cap}")]
    SizeGuard { requested: usize, cap: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl QopError {
    /// True for failures reading or parsing input, as opposed to input that
    /// parsed but failed validation.
    pub fn is_input_failure(&self) -> bool {
        matches!(self, QopError::Malformed(_) | QopError::Io(_))
    }
}

impl From<std::io::Error> for QopError {
    fn from(e: std::io::Error) -> Self {
        QopError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, QopError>;
