//! Error type shared by all evaluators and engines.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("singular point: {0}")]
    SingularPoint(&'static str),

    #[error("group carries no stratified data")]
    MissingStratifiedData,

    #[error("unsupported setting: {0}")]
    UnsupportedSetting(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("quadrature did not converge in {context}: last refinement changed the value by {err:.3e} (target {target:.3e})")]
    NonConvergence {
        context: &'static str,
        err: f64,
        target: f64,
    },

    #[error("integrand produced a non-finite value near {0:?}")]
    NanIntegrand(Vec<f64>),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
