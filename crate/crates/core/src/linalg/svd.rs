//! Singular value decomposition and the spectral helpers built on it.
//!
//! The fast path diagonalizes the Gram matrix `M* M` and recovers the left
//! factor column by column. When the result fails its own verification
//! (ill-conditioned input), the computation falls back to one-sided Jacobi,
//! whose pairwise stopping criterion enforces orthonormality of the left
//! factor directly.

use num_complex::Complex;
use num_traits::One;

use super::jacobi::{hermitian_eig, plane_rotation, rotate_columns};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cast, Real};

const MAX_SWEEPS: usize = 64;

/// Thin SVD: `m = u * diag(s) * v.adjoint()` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    pub u: ComplexMatrix<T>,
    pub s: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let us = ComplexMatrix::from_fn(self.u.rows(), self.s.len(), |i, j| {
            self.u.at(i, j) * Complex::new(self.s[j], T::zero())
        });
        &us * &self.v.adjoint()
    }
}

pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if m.rows() < m.cols() {
        let t = svd(&m.adjoint())?;
        return Ok(Svd { u: t.v, s: t.s, v: t.u });
    }
    if let Ok(result) = gram_route(m) {
        if verify(m, &result) {
            return Ok(result);
        }
    }
    let result = one_sided_jacobi(m)?;
    Ok(result)
}

/// Count of singular values above `rank_tol` times the largest one.
pub fn numerical_rank<T: Real>(m: &ComplexMatrix<T>, rank_tol: T) -> Result<usize> {
    assert!(rank_tol > T::zero(), "rank tolerance must be positive");
    let s = svd(m)?.s;
    let cutoff = rank_tol * s.first().copied().unwrap_or(T::zero());
    Ok(s.iter().filter(|&&x| x > cutoff).count())
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> Result<T> {
    Ok(svd(m)?.s.first().copied().unwrap_or(T::zero()))
}

/// Inverse square root of a Hermitian positive definite matrix.
///
/// Fails with `SingularMarginal` when the smallest eigenvalue does not clear
/// `floor_tol` times the largest; callers treat that as "cannot be filtered".
pub fn inv_sqrt_psd<T: Real>(h: &ComplexMatrix<T>, floor_tol: T) -> Result<ComplexMatrix<T>> {
    let herm_tol = T::EIG_TOL * cast(1e2);
    let eig = hermitian_eig(h, herm_tol)?;
    let n = h.rows();
    let lambda_max = eig.eigenvalues[n - 1];
    let lambda_min = eig.eigenvalues[0];
    if lambda_max <= T::zero() || lambda_min <= floor_tol * lambda_max {
        let ratio = if lambda_max > T::zero() {
            (lambda_min / lambda_max).to_f64().unwrap_or(f64::NAN)
        } else {
            0.0
        };
        return Err(Error::SingularMarginal { ratio, iteration: None });
    }
    let inv_roots: Vec<T> = eig.eigenvalues.iter().map(|&l| T::one() / l.sqrt()).collect();
    let v = &eig.eigenvectors;
    let vs = ComplexMatrix::from_fn(n, n, |i, j| v.at(i, j) * Complex::new(inv_roots[j], T::zero()));
    Ok(&vs * &v.adjoint())
}

fn gram_route<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    let gram = (&m.adjoint() * m).hermitian_part();
    let eig = hermitian_eig(&gram, T::EIG_TOL * cast(1e3))?;
    let p = m.cols();
    assemble_from_right_vectors(m, (0..p).rev().map(|j| eig.eigenvectors.column(j)).collect())
}

/// Builds the thin SVD from a full set of right singular vector candidates
/// (descending order): `s_j = |M v_j|`, `u_j = M v_j / s_j`, with basis
/// completion for the null directions.
fn assemble_from_right_vectors<T: Real>(
    m: &ComplexMatrix<T>,
    right: Vec<Vec<Complex<T>>>,
) -> Result<Svd<T>> {
    let rows = m.rows();
    let p = right.len();
    let images: Vec<Vec<Complex<T>>> = right.iter().map(|v| m.apply(v)).collect();
    let mut s: Vec<T> = images.iter().map(|w| vec_norm(w)).collect();

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&i, &j| s[j].partial_cmp(&s[i]).unwrap());
    let s_max = s[order[0]];
    // image norms at this level are rounding debris of the sweeps, not
    // resolvable singular values; their directions come from completion
    let tiny = s_max * T::epsilon() * cast(384.0 + rows as f64);

    let mut u = ComplexMatrix::zeros(rows, p);
    let mut v = ComplexMatrix::zeros(m.cols(), p);
    let mut pending = Vec::new();
    for (slot, &idx) in order.iter().enumerate() {
        v.set_column(slot, &right[idx]);
        if s[idx] > tiny && s_max > T::zero() {
            let inv = T::one() / s[idx];
            let col: Vec<Complex<T>> = images[idx].iter().map(|&z| z * Complex::new(inv, T::zero())).collect();
            u.set_column(slot, &col);
        } else {
            pending.push(slot);
        }
    }
    complete_basis(&mut u, &pending);
    let mut s_sorted: Vec<T> = order.iter().map(|&i| s[i]).collect();
    for &slot in &pending {
        // Completed directions carry no image mass worth keeping.
        s_sorted[slot] = T::zero();
    }
    s.clear();
    Ok(Svd { u, s: s_sorted, v })
}

/// Fills the listed columns of `u` with unit vectors orthogonal to all other
/// columns. Each slot takes the standard basis vector with the largest
/// projection residual, whose norm is at least `sqrt((rows - filled)/rows)`.
fn complete_basis<T: Real>(u: &mut ComplexMatrix<T>, slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let rows = u.rows();
    let p = u.cols();
    let mut done: Vec<usize> = (0..p).filter(|i| !slots.contains(i)).collect();
    let project = |u: &ComplexMatrix<T>, done: &[usize], col: &mut Vec<Complex<T>>| {
        for &j in done {
            let overlap = dot_columns(u, j, col);
            for i in 0..rows {
                let uij = u.at(i, j);
                col[i] = col[i] - uij * overlap;
            }
        }
    };
    for &slot in slots {
        let mut best: Option<(T, Vec<Complex<T>>)> = None;
        for candidate in 0..rows {
            let mut col = vec![Complex::new(T::zero(), T::zero()); rows];
            col[candidate] = Complex::one();
            project(u, &done, &mut col);
            let norm = vec_norm(&col);
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, col));
            }
        }
        let (_, mut col) = best.expect("rows >= 1");
        // second pass for orthogonality at machine precision
        project(u, &done, &mut col);
        let norm = vec_norm(&col);
        let inv = Complex::new(T::one() / norm, T::zero());
        for z in col.iter_mut() {
            *z = *z * inv;
        }
        u.set_column(slot, &col);
        done.push(slot);
    }
}

fn dot_columns<T: Real>(u: &ComplexMatrix<T>, j: usize, col: &[Complex<T>]) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (i, &x) in col.iter().enumerate() {
        acc += u.at(i, j).conj() * x;
    }
    acc
}

fn vec_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b)
        .sqrt()
}

fn verify<T: Real>(m: &ComplexMatrix<T>, r: &Svd<T>) -> bool {
    let tol = T::EIG_TOL * cast(0.5);
    let utu = &r.u.adjoint() * &r.u;
    if utu.max_abs_diff_identity() > tol {
        return false;
    }
    let vtv = &r.v.adjoint() * &r.v;
    if vtv.max_abs_diff_identity() > tol {
        return false;
    }
    let scale = m.max_abs();
    r.reconstruct().max_abs_diff(m) <= tol * scale.max(T::min_positive_value())
}

fn one_sided_jacobi<T: Real>(m: &ComplexMatrix<T>) -> Result<Svd<T>> {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = m.clone();
    let mut v = ComplexMatrix::<T>::identity(cols);
    // pairs below this relative coupling are at the rounding floor: each
    // rotation against a live column re-injects noise of order
    // eps * sqrt(rows), so the cutoff must sit well above that
    let skip = T::epsilon() * cast(128.0);
    let skip_sqr = skip * skip;
    // columns collapsed to the rounding floor get pinned to exact zero;
    // otherwise their noise-to-noise couplings keep every sweep rotating
    let col_floor = m.frobenius_norm() * T::epsilon() * cast(32.0);
    let floor_sqr = col_floor * col_floor;

    let mut converged = cols < 2;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for q in 0..cols {
            let mut norm_sqr = T::zero();
            for i in 0..rows {
                norm_sqr += w.at(i, q).norm_sqr();
            }
            if norm_sqr > T::zero() && norm_sqr <= floor_sqr {
                let zero = Complex::new(T::zero(), T::zero());
                for i in 0..rows {
                    w.set(i, q, zero);
                }
            }
        }
        let mut rotated = false;
        for p in 0..cols - 1 {
            for q in (p + 1)..cols {
                let mut app = T::zero();
                let mut aqq = T::zero();
                let mut apq = Complex::new(T::zero(), T::zero());
                for i in 0..rows {
                    let wp = w.at(i, p);
                    let wq = w.at(i, q);
                    app += wp.norm_sqr();
                    aqq += wq.norm_sqr();
                    apq += wp.conj() * wq;
                }
                if app == T::zero() || aqq == T::zero() {
                    continue;
                }
                if apq.norm_sqr() <= skip_sqr * app * aqq {
                    continue;
                }
                let rot = plane_rotation(app, apq, aqq);
                rotate_columns(&mut w, p, q, &rot);
                rotate_columns(&mut v, p, q, &rot);
                rotated = true;
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    assemble_from_right_vectors(m, (0..cols).map(|j| v.column(j)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            complex(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    #[test]
    fn identity_singular_values() {
        let s = svd(&ComplexMatrix::<f64>::identity(2)).unwrap().s;
        assert_eq!(s, vec![1.0, 1.0]);
    }

    #[test]
    fn rank_one_half_matrix() {
        let m = ComplexMatrix::from_fn(2, 2, |_, _| complex::<f64>(0.5, 0.0));
        let s = svd(&m).unwrap().s;
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
    }

    #[test]
    fn residual_on_random_rectangular() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(3, 2, &mut rng);
        let f = svd(&m).unwrap();
        assert!(f.reconstruct().max_abs_diff(&m) <= 1e-12 * m.max_abs());
        // wide case goes through the transposed path
        let m = random_matrix(2, 5, &mut rng);
        let f = svd(&m).unwrap();
        assert!(f.reconstruct().max_abs_diff(&m) <= 1e-12 * m.max_abs());
        assert_eq!(f.s.len(), 2);
    }

    #[test]
    fn rank_deficient_case_keeps_orthonormal_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // 4x4 of rank 2 with a huge spread between the two live values
        let a = random_matrix(4, 2, &mut rng);
        let mut b = random_matrix(2, 4, &mut rng);
        b = b.scale(1e-7);
        let m = &a * &b;
        let f = svd(&m).unwrap();
        let utu = &f.u.adjoint() * &f.u;
        assert!(utu.max_abs_diff_identity() < 1e-12);
        let vtv = &f.v.adjoint() * &f.v;
        assert!(vtv.max_abs_diff_identity() < 1e-12);
        assert!(f.reconstruct().max_abs_diff(&m) <= 1e-12 * m.max_abs());
    }

    #[test]
    fn zero_matrix_conventions() {
        let z = ComplexMatrix::<f64>::zeros(3, 3);
        assert_eq!(numerical_rank(&z, 1e-9).unwrap(), 0);
        assert_eq!(operator_norm(&z).unwrap(), 0.0);
        assert!(svd(&z).unwrap().s.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let a = [complex::<f64>(1.0, 2.0), complex(0.0, -1.0), complex(0.5, 0.0)];
        let b = [complex::<f64>(2.0, 0.0), complex(1.0, 1.0)];
        let m = ComplexMatrix::from_fn(3, 2, |i, j| a[i] * b[j].conj());
        assert_eq!(numerical_rank(&m, 1e-9).unwrap(), 1);
        assert_eq!(numerical_rank(&ComplexMatrix::<f64>::identity(4), 1e-9).unwrap(), 4);
    }

    #[test]
    fn operator_norm_cases() {
        assert!((operator_norm(&ComplexMatrix::<f64>::identity(5)).unwrap() - 1.0).abs() < 1e-14);
        let d = ComplexMatrix::diag_real(&[3.0f64, -5.0]);
        assert!((operator_norm(&d).unwrap() - 5.0).abs() < 5e-14);
        // uu^t for u the unnormalized maximally entangled vector on C^3 x C^3
        let n = 3usize;
        let u = ComplexMatrix::<f64>::from_fn(n * n, n * n, |i, j| {
            let ui = (i / n == i % n) as u8 as f64;
            let uj = (j / n == j % n) as u8 as f64;
            complex(ui * uj, 0.0)
        });
        assert!((operator_norm(&u).unwrap() - 3.0).abs() < 1e-13);
    }

    #[test]
    fn inv_sqrt_on_diagonal_and_random_pd() {
        let d = ComplexMatrix::diag_real(&[4.0f64, 1.0]);
        let x = inv_sqrt_psd(&d, 1e-12).unwrap();
        assert!((x.at(0, 0).re - 0.5).abs() < 1e-14);
        assert!((x.at(1, 1).re - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_matrix(6, 6, &mut rng);
        let h = &(&g * &g.adjoint()).hermitian_part() + &ComplexMatrix::identity(6);
        let x = inv_sqrt_psd(&h, 1e-12).unwrap();
        let xhx = &(&x * &h) * &x;
        assert!(xhx.max_abs_diff_identity() < 1e-10);
        // commutes with its argument
        let lhs = &x * &h;
        let rhs = &h * &x;
        assert!(lhs.max_abs_diff(&rhs) < 1e-10 * h.max_abs());
    }

    #[test]
    fn inv_sqrt_rejects_singular() {
        let d = ComplexMatrix::diag_real(&[1.0, 1e-15]);
        assert!(matches!(
            inv_sqrt_psd(&d, 1e-12),
            Err(Error::SingularMarginal { .. })
        ));
    }
}
