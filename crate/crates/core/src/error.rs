use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square: {0} x {1}")]
    NotSquare(usize, usize),

    #[error("matrix is singular to working precision")]
    SingularMatrix,

    #[error("refusing to densify a {n} x {n} operator (cap {cap})")]
    DensifyCap { n: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator is not symmetric")]
    NotSymmetric,

    #[error("operator is not positive definite (p^T A p = {0:e})")]
    NotSpd(f64),

    #[error("slack basis infeasible: rhs entry {row} is {value}")]
    InfeasibleStart { row: usize, value: f64 },

    #[error("quadrature did not converge: achieved error estimate {achieved:e}")]
    Quadrature { achieved: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
