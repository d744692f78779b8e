use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NonSpdInput { min_eigenvalue: f64 },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("point leaves the polar chart: r = {r} < r_min = {r_min}")]
    ChartViolation { r: f64, r_min: f64 },

    #[error("supplied covariance derivative disagrees with finite differences at index {index} (relative deviation {deviation:e})")]
    InconsistentDerivatives { index: usize, deviation: f64 },

    #[error("covariance lost positivity at t = {time}")]
    LostPositivity { time: f64 },

    #[error("unstable integration: particle {particle} left the domain at step {step}")]
    UnstableIntegration { particle: usize, step: usize },

    #[error("no operating point with efficiency {eta} is spanned by the sweep")]
    NoCrossing { eta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
