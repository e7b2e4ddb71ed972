use thiserror::Error;

/// Errors raised by the matrix-analysis routines.
///
/// Numeric payloads are converted to `f64` so the error type stays independent
/// of the scalar type.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),

    #[error("matrix is not Hermitian (defect {defect:e}, allowed {allowed:e})")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("matrix is singular (min eigenvalue {min_eigenvalue:e}, threshold {threshold:e})")]
    Singular { min_eigenvalue: f64, threshold: f64 },

    #[error("condition number {condition:e} exceeds limit {limit:e}")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },

    #[error("function undefined at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} do not commute: commutator norm {norm:e} exceeds {allowed:e}")]
    CommutationViolated { what: &'static str, norm: f64, allowed: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{solver} did not converge in {iterations} iterations (residual {residual:e})")]
    SolverNoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
        residual_history: Vec<f64>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
