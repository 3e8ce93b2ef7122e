use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {x} outside [-1, 1]")]
    Domain { x: f64 },

    #[error("invalid harmonic index (n = {degree}, k = {order})")]
    InvalidIndex { degree: usize, order: i64 },

    #[error("order must be positive, got {0}")]
    ZeroOrder(usize),

    #[error("Newton iteration for root {root} of P_{order} did not converge")]
    NoConvergence { order: usize, root: usize },

    #[error("max degree {max_degree} exceeds grid degree {grid_degree}")]
    DegreeExceedsGrid { max_degree: usize, grid_degree: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid ladder: {0}")]
    InvalidLadder(String),

    #[error("level {level} out of range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
