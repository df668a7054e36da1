use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series did not converge after {terms} terms (last partial sum {partial:e})")]
    NonConvergence { terms: usize, partial: f64 },

    #[error("grid too short: need at least {needed} points, got {got}")]
    GridTooShort { needed: usize, got: usize },

    #[error("quadrature failed: value {value:e} with error estimate {error:e}")]
    QuadratureFailure { value: f64, error: f64 },

    #[error("kernel is singular at the evaluation point: {0}")]
    EvaluationAtSingularity(String),

    #[error("covariance kernel is singular at argument {0:?}")]
    SingularArgument(Vec<f64>),

    #[error("envelope fit failed: {0}")]
    FitFailure(String),

    #[error("covariance matrix not positive semidefinite: clipped mass {clipped:e} exceeds {limit:e}")]
    NotPositiveSemidefinite { clipped: f64, limit: f64 },

    #[error("integral diverges: {0}")]
    DivergenceDetected(String),

    #[error("degenerate branch 2H-2+kappa/d = -1 (value {0}); use the log-corrected check")]
    DegenerateBranch(f64),

    #[error("numerical blow-up at time step {step}: |u| = {value:e}; refine the grid")]
    NumericalBlowup { step: usize, value: f64 },

    #[error("envelope exponents for alpha = {0} in d >= 2 are not available")]
    MissingEnvelope(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
