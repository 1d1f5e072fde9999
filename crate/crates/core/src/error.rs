use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A matrix or tensor fails the structural checks of a quantum state.
    #[error("validation error: {0}")]
    Validation(String),

    /// A derived quantity (population, purity) is outside its physical range.
    #[error("unphysical state: {0}")]
    Physicality(String),

    /// The generalized Bloch length drifted by more than the tolerance.
    #[error("integration accuracy lost: Bloch length drifted by {drift:.3e} (tolerance {tolerance:.1e})")]
    Accuracy { drift: f64, tolerance: f64 },

    /// The coefficient trajectory disagrees with the density-matrix propagator.
    #[error("oracle mismatch: max deviation {deviation:.3e} exceeds {tolerance:.1e}")]
    OracleMismatch { deviation: f64, tolerance: f64 },

    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Domain(_) | Error::Validation(_) => 2,
            Error::Accuracy { .. } | Error::OracleMismatch { .. } | Error::Physicality(_) => 3,
            Error::Io(_) => 4,
        }
    }
}
