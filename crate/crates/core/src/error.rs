use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds {tolerance:.3e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("eigendecomposition did not converge")]
    EigenDecompositionFailed,

    #[error("spectral function undefined on eigenvalue {eigenvalue:.6e}")]
    SpectralFunctionDomain { eigenvalue: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("not a valid quantum channel: {0}")]
    InvalidChannel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),
}

impl Error {
    pub(crate) fn dims(
        context: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
