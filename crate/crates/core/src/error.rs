use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value array has {actual} entries, grid expects {expected}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("grid size {0} is not a positive power of two")]
    NotPowerOfTwo(usize),

    #[error("operation expects the {expected} side, got the {actual} side")]
    WrongSide { expected: &'static str, actual: &'static str },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("function does not decay at the domain boundary (max |u| = {max_abs:e}, tolerance {tol:e})")]
    BoundaryDecay { max_abs: f64, tol: f64 },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("support [{lo}, {hi}] does not fit inside the grid window [{grid_lo}, {grid_hi}]")]
    SupportOutsideGrid { lo: f64, hi: f64, grid_lo: f64, grid_hi: f64 },

    #[error("non-finite state at step {step}")]
    Blowup { step: usize },

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
