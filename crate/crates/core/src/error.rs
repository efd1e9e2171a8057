use thiserror::Error;

/// Errors produced by the integrators, special functions and checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value while evaluating a step from t = {t}")]
    NonFinite { t: f64 },

    #[error("stage equations did not converge after {iterations} iterations (residual {residual:e})")]
    StageSolveFailure { iterations: usize, residual: f64 },

    #[error("blow-up time fit failed: {0}")]
    FitFailure(String),

    #[error("closed form {family} does not apply to A = {a}, B = {b}")]
    BranchMismatch { family: &'static str, a: f64, b: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("k = {k} is not a root of 2k^2 + Ak - B = 0 (residual {residual:e})")]
    NotACharacteristicRoot { k: f64, residual: f64 },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("trajectory blew up inside the requested range")]
    BlownUpTrajectory,

    #[error("profile grid is not uniform")]
    NonUniformGrid,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("invalid options: {0}")]
    InvalidOptions(String),
}

pub type Result<T> = std::result::Result<T, Error>;
