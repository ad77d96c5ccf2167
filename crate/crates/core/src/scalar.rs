//! Scalar abstraction: the whole crate is generic over the real floating-point
//! type carried by [`num_complex::Complex`]. `f64` is what the CLI and the
//! crate-root aliases use; `f32` exists for cheap smoke checks.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar underlying all matrices: `f32` or `f64`.
///
/// The associated constants are the library-wide default tolerances. All of
/// them are relative: every comparison scales them by the magnitude of the
/// quantity under test.
pub trait Real:
    Float + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Kernel tolerance: eigen/SVD reconstruction and orthonormality.
    const EIG_TOL: Self;
    /// Singular-value cutoff for numerical rank decisions.
    const RANK_TOL: Self;
    /// Eigenvalue floor below which a positive matrix counts as singular.
    const FLOOR_TOL: Self;
    /// Marginal residual target for Sinkhorn filtering.
    const FNF_TOL: Self;
    /// Largest admissible perturbation weight for the symmetric-ball embedding.
    const EPS_MAX: Self;
}

impl Real for f64 {
    const EIG_TOL: Self = 1e-12;
    const RANK_TOL: Self = 1e-9;
    const FLOOR_TOL: Self = 1e-12;
    const FNF_TOL: Self = 1e-10;
    const EPS_MAX: Self = 1.0 / 6.0;
}

impl Real for f32 {
    const EIG_TOL: Self = 1e-5;
    const RANK_TOL: Self = 1e-4;
    const FLOOR_TOL: Self = 1e-6;
    const FNF_TOL: Self = 1e-4;
    const EPS_MAX: Self = 1.0 / 6.0;
}

/// Converts an `f64` literal to the working scalar.
#[inline]
pub fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite literal")
}

/// Builds a complex number from `f64` components in the working scalar.
#[inline]
pub fn complex<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(cast(re), cast(im))
}
