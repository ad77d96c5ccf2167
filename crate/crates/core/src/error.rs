//! Crate-wide error type. Diagnostic payloads are stored as `f64` regardless
//! of the working scalar so the variants stay object-safe and printable.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: relative asymmetry {residual:e} exceeds {tol:e}")]
    NotHermitian { residual: f64, tol: f64 },

    #[error("iteration exceeded its sweep budget of {sweeps}")]
    NoConvergence { sweeps: usize },

    #[error("marginal is numerically singular: eigenvalue ratio {ratio:e} at or below the floor{}",
            iteration.map(|i| format!(" (iteration {i})")).unwrap_or_default())]
    SingularMarginal { ratio: f64, iteration: Option<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not positive semidefinite: smallest eigenvalue {lambda_min:e}")]
    NotAState { lambda_min: f64 },

    #[error("operator is zero")]
    ZeroState,

    #[error("epsilon {0} outside the admissible interval (0, 1/6]")]
    EpsilonOutOfRange(f64),

    #[error("operator is not flip symmetric: relative residual {0:e}")]
    NotFlipSymmetric(f64),

    #[error("factor dimensions are equal (k = m = {0}); the rank witness needs k != m")]
    EqualDims(usize),

    #[error("requested rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("vector is zero")]
    ZeroVector,
}
