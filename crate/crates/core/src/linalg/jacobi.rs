//! Cyclic Jacobi diagonalization for complex Hermitian matrices.
//!
//! Each sweep visits every off-diagonal pair (p, q) and annihilates it with a
//! unitary plane rotation. The rotation for a Hermitian 2x2 block
//! `[[a, h], [conj(h), b]]` factors into a phase that makes the coupling real
//! followed by a classical real Jacobi rotation.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Unitary plane rotation `J = [[c, s], [-s*conj(phase), c*conj(phase)]]`
/// with `c, s` real and `phase = h / |h|`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PlaneRotation<T> {
    pub c: T,
    pub s: T,
    pub phase: Complex<T>,
}

/// Rotation diagonalizing the Hermitian block `[[a, h], [conj(h), b]]`.
/// Caller must ensure `h != 0`.
pub(crate) fn plane_rotation<T: Real>(a: T, h: Complex<T>, b: T) -> PlaneRotation<T> {
    let r = h.norm();
    let phase = Complex::new(h.re / r, h.im / r);
    let two = T::one() + T::one();
    let tau = (b - a) / (two * r);
    let t = if tau == T::zero() {
        T::one()
    } else {
        let sign = if tau > T::zero() { T::one() } else { -T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    PlaneRotation { c, s: t * c, phase }
}

/// Right-multiplies columns `p, q` by the rotation: `M <- M J`.
pub(crate) fn rotate_columns<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, j: &PlaneRotation<T>) {
    let cols = m.cols();
    let rows = m.rows();
    let pc = j.phase.conj();
    let data = m.data_mut();
    for i in 0..rows {
        let xp = data[i * cols + p];
        let xq = data[i * cols + q];
        data[i * cols + p] = xp * j.c - xq * (pc * j.s);
        data[i * cols + q] = xp * j.s + xq * (pc * j.c);
    }
}

/// Left-multiplies rows `p, q` by the adjoint rotation: `M <- J* M`.
fn rotate_rows_adjoint<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize, j: &PlaneRotation<T>) {
    let cols = m.cols();
    let ph = j.phase;
    let data = m.data_mut();
    for k in 0..cols {
        let xp = data[p * cols + k];
        let xq = data[q * cols + k];
        data[p * cols + k] = xp * j.c - xq * (ph * j.s);
        data[q * cols + k] = xp * j.s + xq * (ph * j.c);
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigResult<T> {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<T>,
    /// Unit-norm eigenvectors as columns, ordered to match `eigenvalues`.
    pub eigenvectors: ComplexMatrix<T>,
}

fn off_norm_sqr<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut sum = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            sum += a.at(p, q).norm_sqr();
        }
    }
    sum + sum
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi sweeps.
///
/// `tol` is the relative Hermiticity tolerance of the input; the matrix is
/// symmetrized exactly once before iterating, so the result always describes
/// the Hermitian part.
pub fn hermitian_eig<T: Real>(h: &ComplexMatrix<T>, tol: T) -> Result<EigResult<T>> {
    let n = h.square_side()?;
    let residual = h.hermitian_residual();
    let scale = h.max_abs();
    if residual > tol * scale {
        return Err(Error::NotHermitian {
            residual: (residual / scale).to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::<T>::identity(n);
    let frob = a.frobenius_norm();

    if n > 1 && frob > T::zero() {
        let four = T::from_f64(4.0).unwrap();
        let stop = frob * T::epsilon() * four;
        let pair_skip = stop / T::from_f64(n as f64).unwrap();
        let pair_skip_sqr = pair_skip * pair_skip;
        let mut converged = false;
        for _sweep in 0..MAX_SWEEPS {
            if off_norm_sqr(&a) <= stop * stop {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let hpq = a.at(p, q);
                    if hpq.norm_sqr() <= pair_skip_sqr {
                        continue;
                    }
                    let rot = plane_rotation(a.at(p, p).re, hpq, a.at(q, q).re);
                    rotate_columns(&mut a, p, q, &rot);
                    rotate_rows_adjoint(&mut a, p, q, &rot);
                    rotate_columns(&mut v, p, q, &rot);
                }
            }
        }
        if !converged && off_norm_sqr(&a) > stop * stop {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.at(i, i).re.partial_cmp(&a.at(j, j).re).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&i| a.at(i, i).re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.at(i, order[j]));

    Ok(EigResult {
        eigenvalues,
        eigenvectors,
    })
}
