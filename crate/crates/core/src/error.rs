use thiserror::Error;

/// Errors produced by the geometry, classification and workbench layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A state failed validation; `invariant` names the violated condition.
    #[error("state validation failed ({invariant}): {detail}")]
    Validation {
        invariant: &'static str,
        detail: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("rank deficiency: {0}")]
    Rank(String),

    #[error("geometric infeasibility: {0}")]
    GeometricInfeasibility(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("projective normalization undefined: {0}")]
    ProjectionUndefined(String),

    #[error("no bracket: predicate is {value} at both ends of [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64, value: bool },

    /// A target outcome lies outside the box; `residual` is the best
    /// reconstruction error that could be reached.
    #[error("certificate violation: residual {residual:e}")]
    CertificateViolation { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
