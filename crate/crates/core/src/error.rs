use thiserror::Error;

/// Errors raised by the simulation engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation {0} is too small: each factor needs at least 2 levels")]
    InvalidTruncation(usize),

    #[error("Fock level {level} out of range for truncation {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("mode index {index} out of range for {factors} tensor factors")]
    InvalidMode { index: usize, factors: usize },

    #[error("operator list is empty")]
    EmptyOperatorList,

    #[error("rate must be non-negative, got {0}")]
    NegativeRate(f64),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error(
        "displacement solver failed after {iterations} iterations: drive {drive} is at or \
         beyond the critical driving, estimated at {critical_drive:.6e}"
    )]
    CriticalDriving {
        iterations: usize,
        drive: f64,
        critical_drive: f64,
    },

    #[error("adaptive integrator failed at t = {t_reached}: {reason}")]
    IntegratorFailure { t_reached: f64, reason: String },

    #[error("steady state is not unique or the system is singular: {0}")]
    DegenerateSteadyState(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
