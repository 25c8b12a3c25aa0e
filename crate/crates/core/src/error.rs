use thiserror::Error;

use crate::spectral::GridSpec;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("grid spec mismatch: {0:?} vs {1:?}")]
    SpecMismatch(GridSpec, GridSpec),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("form degree {got} where {expected} was required")]
    FormDegree { expected: usize, got: usize },

    #[error("domain error at {location:?}: {reason}")]
    Domain { location: Vec<f64>, reason: String },

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("regularity certificate failed: {0}")]
    Regularity(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator exhausted {attempts} attempts: {advice}")]
    GeneratorExhausted { attempts: usize, advice: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn ensure_same_spec(a: GridSpec, b: GridSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpecMismatch(a, b))
    }
}
