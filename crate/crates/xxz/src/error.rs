use qcorr_core::CorrError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum XxzError {
    #[error("invalid chain: {0}")]
    InvalidSpec(String),

    #[error("sector n_up = {n_up} does not exist for L = {l}")]
    InvalidSector { l: usize, n_up: usize },

    #[error("Lanczos did not converge in sector n_up = {n_up} after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        n_up: usize,
        iterations: usize,
        residual: f64,
    },

    #[error("Δ = {delta} lies within {window} of the level crossing at Δ = 1")]
    NearCrossing { delta: f64, window: f64 },

    #[error("chain invariant violated: {0}")]
    InvariantViolated(String),

    #[error(transparent)]
    Correlation(#[from] CorrError),
}

pub type Result<T> = std::result::Result<T, XxzError>;
