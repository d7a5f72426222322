use thiserror::Error;

/// Errors raised by the quaternion kernels, operators, processes and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("attempted to invert the zero quaternion")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Givens rotation requested for a zero pair")]
    DegenerateRotation,
    #[error("diagonal entry in row {row} is zero or missing")]
    ZeroDiagonal { row: usize },
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("integration diverged at step {step}")]
    Divergence { step: usize },
    #[error("trajectory too short: need {needed} samples, have {available}")]
    TrajectoryTooShort { needed: usize, available: usize },
    #[error("biorthogonalization restarted more than {max} times")]
    RestartsExhausted { max: usize },
}
