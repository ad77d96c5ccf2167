//! Toolkit for bipartite density matrices built around one construction: any
//! state on `C^k (x) C^m` is carried to an operator on
//! `C^(k+m) (x) C^(k+m)` that stays positive definite under partial transpose
//! and under partial transpose composed with realignment, lives in an
//! arbitrarily small trace-norm ball around the symmetric projector, and can
//! then be scaled to the filter normal form (both marginals equal to the
//! identity) by an operator Sinkhorn iteration with a single symmetric
//! filter.
//!
//! Modules:
//!
//! * [`linalg`] — self-contained dense complex kernels (cyclic Jacobi
//!   eigensolver, one-sided Jacobi SVD, spectral helpers);
//! * [`bipartite`] — the tensor-product calculus: partial transpose,
//!   realignment, flip, marginals, projectors, induced maps;
//! * [`embedding`] — the structure matrices `C` and `Q`, the embedding map,
//!   and the positivity certificates;
//! * [`schmidt`] — Schmidt decomposition, seeded random ensembles, rank
//!   certificates for the lift/compress maps;
//! * [`fnf`] — operator Sinkhorn scaling and the filtering obstruction
//!   witness.
//!
//! Everything is generic over the scalar via [`scalar::Real`]; the aliases
//! below pin the `f64` instantiation used by the command-line tool.

pub mod bipartite;
pub mod embedding;
pub mod error;
pub mod fnf;
pub mod linalg;
pub mod scalar;
pub mod schmidt;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the main types.
pub type Matrix64 = linalg::ComplexMatrix<f64>;
pub type Operator64 = bipartite::BipartiteOperator<f64>;
pub type Pure64 = bipartite::PureVector<f64>;
pub type Embedding64 = embedding::EmbeddingPair<f64>;
pub type SpcReport64 = embedding::SpcReport<f64>;
pub type SinkhornResult64 = fnf::SinkhornResult<f64>;

/// `f32` instantiations, mainly for cheap smoke checks.
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Operator32 = bipartite::BipartiteOperator<f32>;
pub type Pure32 = bipartite::PureVector<f32>;
pub type Embedding32 = embedding::EmbeddingPair<f32>;
