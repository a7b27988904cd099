use thiserror::Error;

/// Errors raised by the numerical and stochastic routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("series did not converge within {terms} terms ({context})")]
    NonConvergent { terms: usize, context: String },

    #[error("series diverges at term {index} ({context})")]
    SeriesDiverges { index: usize, context: String },

    #[error("numerator Gamma evaluated at the pole {0}")]
    GammaPole(f64),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("Laplace inversion failed: {0}")]
    InversionFailure(String),

    #[error("transform evaluation failed at s = {0}")]
    EvaluationError(String),

    #[error("path did not cross level {level} before the horizon {horizon}")]
    HorizonExceeded { level: f64, horizon: f64 },

    #[error("Euler step too large: {0}")]
    StepTooLarge(String),

    #[error("random stream {0} reused for two independent components")]
    StreamReuse(String),
}

impl Error {
    /// Whether the error comes from argument validation rather than a
    /// numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::StreamReuse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParams(msg.into()))
}
