//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by validation, numerics, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands or inputs whose shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix that was required to be unitary is not, within tolerance.
    #[error("matrix is not unitary: max deviation {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { deviation: f64, tol: f64 },

    /// A matrix that was required to be a density matrix fails one of the
    /// defining properties (Hermiticity, unit trace, positivity).
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// A Kraus operator list that is not a trace-preserving unital channel.
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// A probability vector with negative entries or the wrong sum.
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    /// A Hamiltonian spectrum with (near-)degenerate levels, for which the
    /// asymmetry weights are ill-conditioned.
    #[error("degenerate spectrum: minimum level gap {min_gap:.3e} is below {tol:.3e}")]
    DegenerateSpectrum { min_gap: f64, tol: f64 },

    /// The iterative SVD failed to converge; the trace norm is unavailable.
    #[error("singular value decomposition did not converge")]
    SvdFailure,

    /// A statistic was requested from too little data.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A scalar or structural argument outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// File system failure while reading or writing.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line tool: 1 for numerical
    /// failures, 2 for validation and input errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SvdFailure => 1,
            _ => 2,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
