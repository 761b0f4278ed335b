use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series did not converge after {terms} terms")]
    SeriesNotConverged { terms: usize },

    #[error("calibration did not converge after {iterations} iterations (residuals {residuals:?})")]
    Calibration { iterations: usize, residuals: [f64; 2] },

    #[error("no smooth-pasting band exists: {0}")]
    NoSolution(String),

    #[error("time {t} outside [0, {horizon}]")]
    OutOfRange { t: f64, horizon: f64 },

    #[error("non-finite value at time step {step}")]
    Instability { step: usize },

    #[error("singular tridiagonal system (zero pivot in row {row})")]
    SingularSystem { row: usize },

    #[error("non-monotone refinement in {axis}: probe differences {differences:?}")]
    Diagnostics { axis: &'static str, differences: [f64; 2] },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
