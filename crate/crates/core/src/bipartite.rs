//! Operators and vectors on a bipartite tensor-product space, with the index
//! convention fixed once for the whole crate:
//!
//! composite index `(a, b) -> a * dimB + b`, zero based, for rows and columns
//! alike. Everything below is defined against this convention:
//!
//! * partial transpose acts on the second factor: `(A x B)^PT = A x B^t`;
//! * realignment maps entry `((a, b), (a', b'))` to entry `((a, a'), (b, b'))`
//!   of a `dimA^2 x dimB^2` matrix, so that `R(Id) = u u^t` and
//!   `R(u u^t) = Id` for the unnormalized maximally entangled vector `u`;
//! * the flip `F` sends `a x b` to `b x a`, and `F^PT = u u^t`.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cast, Real};

/// Square operator on `C^dimA (x) C^dimB` with recorded factor dimensions.
#[derive(Debug, Clone)]
pub struct BipartiteOperator<T> {
    dim_a: usize,
    dim_b: usize,
    mat: ComplexMatrix<T>,
}

/// Vector in `C^dimA (x) C^dimB` with recorded factor dimensions.
#[derive(Debug, Clone)]
pub struct PureVector<T> {
    dim_a: usize,
    dim_b: usize,
    data: Vec<Complex<T>>,
}

#[inline]
fn pair(a: usize, b: usize, dim_b: usize) -> usize {
    a * dim_b + b
}

impl<T: Real> BipartiteOperator<T> {
    pub fn new(dim_a: usize, dim_b: usize, mat: ComplexMatrix<T>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch("factor dimensions must be positive".into()));
        }
        let side = dim_a * dim_b;
        if mat.rows() != side || mat.cols() != side {
            return Err(Error::DimensionMismatch(format!(
                "operator on a {dim_a}x{dim_b} system must be {side}x{side}, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Self { dim_a, dim_b, mat })
    }

    pub(crate) fn from_parts(dim_a: usize, dim_b: usize, mat: ComplexMatrix<T>) -> Self {
        debug_assert_eq!(mat.rows(), dim_a * dim_b);
        debug_assert_eq!(mat.cols(), dim_a * dim_b);
        Self { dim_a, dim_b, mat }
    }

    pub fn identity(dim_a: usize, dim_b: usize) -> Self {
        Self::from_parts(dim_a, dim_b, ComplexMatrix::identity(dim_a * dim_b))
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.dim_a * self.dim_b
    }

    #[inline]
    pub fn mat(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_mat(self) -> ComplexMatrix<T> {
        self.mat
    }

    #[inline]
    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> Complex<T> {
        self.mat.at(pair(row.0, row.1, self.dim_b), pair(col.0, col.1, self.dim_b))
    }

    pub fn trace(&self) -> Complex<T> {
        self.mat.trace()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_parts(self.dim_a, self.dim_b, self.mat.scale(s))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self::from_parts(self.dim_a, self.dim_b, &self.mat + &other.mat))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self::from_parts(self.dim_a, self.dim_b, &self.mat - &other.mat))
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if (self.dim_a, self.dim_b) != (other.dim_a, other.dim_b) {
            return Err(Error::DimensionMismatch(format!(
                "factor dimensions differ: {}x{} vs {}x{}",
                self.dim_a, self.dim_b, other.dim_a, other.dim_b
            )));
        }
        Ok(())
    }

    /// Rescales so that the trace equals `target`.
    pub fn normalize_trace(&self, target: T) -> Result<Self> {
        let tr = self.trace().re;
        if tr.abs() <= T::min_positive_value() * cast(1e4) {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(target / tr))
    }

    /// Transpose on the second factor: output `((a,b),(a',b')) = input ((a,b'),(a',b))`.
    pub fn partial_transpose(&self) -> Self {
        let (da, db) = (self.dim_a, self.dim_b);
        let mat = ComplexMatrix::from_fn(self.side(), self.side(), |r, c| {
            let (a, b) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            self.entry((a, b2), (a2, b))
        });
        Self::from_parts(da, db, mat)
    }

    /// Realignment: output entry `((a,a'),(b,b')) = input entry ((a,b),(a',b'))`,
    /// a `dimA^2 x dimB^2` matrix.
    pub fn realign(&self) -> ComplexMatrix<T> {
        let (da, db) = (self.dim_a, self.dim_b);
        ComplexMatrix::from_fn(da * da, db * db, |r, c| {
            let (i, j) = (r / da, r % da);
            let (k, l) = (c / db, c % db);
            self.entry((i, k), (j, l))
        })
    }

    /// Trace over the second factor: `marginal_a(A x B) = A * tr(B)`.
    pub fn marginal_a(&self) -> ComplexMatrix<T> {
        let (da, db) = (self.dim_a, self.dim_b);
        ComplexMatrix::from_fn(da, da, |a, a2| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for b in 0..db {
                acc += self.entry((a, b), (a2, b));
            }
            acc
        })
    }

    /// Trace over the first factor: `marginal_b(A x B) = B * tr(A)`.
    pub fn marginal_b(&self) -> ComplexMatrix<T> {
        let (da, db) = (self.dim_a, self.dim_b);
        ComplexMatrix::from_fn(db, db, |b, b2| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for a in 0..da {
                acc += self.entry((a, b), (a, b2));
            }
            acc
        })
    }

    /// The map `X -> sum_i tr(A_i X) B_i` induced by `delta = sum_i A_i x B_i`:
    /// entry `(b, b')` of the output is `sum_{a,a'} delta((a,b),(a',b')) X(a',a)`.
    pub fn g_map(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.rows() != self.dim_a || x.cols() != self.dim_a {
            return Err(Error::DimensionMismatch(format!(
                "g_map argument must be {0}x{0}, got {1}x{2}",
                self.dim_a,
                x.rows(),
                x.cols()
            )));
        }
        let (da, db) = (self.dim_a, self.dim_b);
        Ok(ComplexMatrix::from_fn(db, db, |b, b2| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for a in 0..da {
                for a2 in 0..da {
                    acc += self.entry((a, b), (a2, b2)) * x.at(a2, a);
                }
            }
            acc
        }))
    }

    /// `(X x Id) self (X x Id)*`.
    pub fn conjugate_a(&self, x: &ComplexMatrix<T>) -> Result<Self> {
        if x.rows() != self.dim_a || x.cols() != self.dim_a {
            return Err(Error::DimensionMismatch(format!(
                "A-side filter must be {0}x{0}, got {1}x{2}",
                self.dim_a,
                x.rows(),
                x.cols()
            )));
        }
        let (da, db) = (self.dim_a, self.dim_b);
        let s = self.side();
        let zero = Complex::new(T::zero(), T::zero());

        // rows: out[(a,b), j] = sum_c x[a,c] * in[(c,b), j]
        let mut tmp = ComplexMatrix::zeros(s, s);
        for a in 0..da {
            for c in 0..da {
                let w = x.at(a, c);
                if w == zero {
                    continue;
                }
                for b in 0..db {
                    let dst = pair(a, b, db) * s;
                    let src = pair(c, b, db) * s;
                    for j in 0..s {
                        let v = self.mat.data()[src + j];
                        tmp.data_mut()[dst + j] += w * v;
                    }
                }
            }
        }
        // cols: out[i, (a',b')] = sum_c conj(x[a',c]) * tmp[i, (c,b')]
        let mut out = ComplexMatrix::zeros(s, s);
        for i in 0..s {
            let row = i * s;
            for a2 in 0..da {
                for c in 0..da {
                    let w = x.at(a2, c).conj();
                    if w == zero {
                        continue;
                    }
                    for b2 in 0..db {
                        let v = tmp.data()[row + pair(c, b2, db)];
                        out.data_mut()[row + pair(a2, b2, db)] += w * v;
                    }
                }
            }
        }
        Ok(Self::from_parts(da, db, out))
    }

    /// `(Id x Y) self (Id x Y)*`.
    pub fn conjugate_b(&self, y: &ComplexMatrix<T>) -> Result<Self> {
        if y.rows() != self.dim_b || y.cols() != self.dim_b {
            return Err(Error::DimensionMismatch(format!(
                "B-side filter must be {0}x{0}, got {1}x{2}",
                self.dim_b,
                y.rows(),
                y.cols()
            )));
        }
        let (da, db) = (self.dim_a, self.dim_b);
        let s = self.side();
        let zero = Complex::new(T::zero(), T::zero());

        let mut tmp = ComplexMatrix::zeros(s, s);
        for b in 0..db {
            for d in 0..db {
                let w = y.at(b, d);
                if w == zero {
                    continue;
                }
                for a in 0..da {
                    let dst = pair(a, b, db) * s;
                    let src = pair(a, d, db) * s;
                    for j in 0..s {
                        let v = self.mat.data()[src + j];
                        tmp.data_mut()[dst + j] += w * v;
                    }
                }
            }
        }
        let mut out = ComplexMatrix::zeros(s, s);
        for i in 0..s {
            let row = i * s;
            for b2 in 0..db {
                for d in 0..db {
                    let w = y.at(b2, d).conj();
                    if w == zero {
                        continue;
                    }
                    for a2 in 0..da {
                        let v = tmp.data()[row + pair(a2, d, db)];
                        out.data_mut()[row + pair(a2, b2, db)] += w * v;
                    }
                }
            }
        }
        Ok(Self::from_parts(da, db, out))
    }

    /// `(X x Y) self (X x Y)*`.
    pub fn conjugate_pair(&self, x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> Result<Self> {
        self.conjugate_a(x)?.conjugate_b(y)
    }

    /// Relative residual of `F self F - self`; zero for flip-symmetric operators.
    pub fn flip_residual(&self) -> Result<T> {
        if self.dim_a != self.dim_b {
            return Err(Error::DimensionMismatch(
                "flip symmetry needs equal factor dimensions".into(),
            ));
        }
        let scale = self.mat.max_abs();
        if scale == T::zero() {
            return Ok(T::zero());
        }
        let n = self.dim_a;
        let mut worst = T::zero();
        for a in 0..n {
            for b in 0..n {
                for a2 in 0..n {
                    for b2 in 0..n {
                        let d = self.entry((b, a), (b2, a2)) - self.entry((a, b), (a2, b2));
                        worst = worst.max(d.norm_sqr());
                    }
                }
            }
        }
        Ok(worst.sqrt() / scale)
    }

    pub fn max_abs(&self) -> T {
        self.mat.max_abs()
    }

    pub fn hermitian_part(&self) -> Self {
        Self::from_parts(self.dim_a, self.dim_b, self.mat.hermitian_part())
    }
}

impl<T: Real> PureVector<T> {
    pub fn new(dim_a: usize, dim_b: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch("factor dimensions must be positive".into()));
        }
        if data.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch(format!(
                "vector on a {dim_a}x{dim_b} system must have length {}, got {}",
                dim_a * dim_b,
                data.len()
            )));
        }
        Ok(Self { dim_a, dim_b, data })
    }

    pub(crate) fn from_parts(dim_a: usize, dim_b: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), dim_a * dim_b);
        Self { dim_a, dim_b, data }
    }

    pub fn zeros(dim_a: usize, dim_b: usize) -> Self {
        Self::from_parts(dim_a, dim_b, vec![Complex::new(T::zero(), T::zero()); dim_a * dim_b])
    }

    /// Tensor product of two coefficient slices.
    pub fn tensor(a: &[Complex<T>], b: &[Complex<T>]) -> Self {
        let mut data = Vec::with_capacity(a.len() * b.len());
        for &x in a {
            for &y in b {
                data.push(x * y);
            }
        }
        Self::from_parts(a.len(), b.len(), data)
    }

    #[inline]
    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    #[inline]
    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> Complex<T> {
        self.data[pair(a, b, self.dim_b)]
    }

    pub fn norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |x, y| x + y)
            .sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        let f = Complex::new(s, T::zero());
        Self::from_parts(self.dim_a, self.dim_b, self.data.iter().map(|&z| z * f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim_a, self.dim_b), (other.dim_a, other.dim_b));
        Self::from_parts(
            self.dim_a,
            self.dim_b,
            self.data.iter().zip(&other.data).map(|(&x, &y)| x + y).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.dim_a, self.dim_b), (other.dim_a, other.dim_b));
        Self::from_parts(
            self.dim_a,
            self.dim_b,
            self.data.iter().zip(&other.data).map(|(&x, &y)| x - y).collect(),
        )
    }

    /// Reshapes to the `dimA x dimB` coefficient matrix `M[a,b] = v[(a,b)]`.
    pub fn as_matrix(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.dim_a, self.dim_b, |a, b| self.at(a, b))
    }

    /// Rank-one projector `v v*`.
    pub fn projector(&self) -> BipartiteOperator<T> {
        let side = self.data.len();
        let mat = ComplexMatrix::from_fn(side, side, |i, j| self.data[i] * self.data[j].conj());
        BipartiteOperator::from_parts(self.dim_a, self.dim_b, mat)
    }
}

/// Kronecker product under the crate-wide index convention.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a.at(i / rb, j / cb) * b.at(i % rb, j % cb)
    })
}

/// The flip operator `F(a x b) = b x a` on `C^n (x) C^n`.
pub fn flip<T: Real>(n: usize) -> BipartiteOperator<T> {
    assert!(n >= 1);
    let mut mat = ComplexMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            mat.set(pair(a, b, n), pair(b, a, n), Complex::one());
        }
    }
    BipartiteOperator::from_parts(n, n, mat)
}

/// Orthogonal projection onto the symmetric subspace: `(Id + F) / 2`.
pub fn proj_sym<T: Real>(n: usize) -> BipartiteOperator<T> {
    half_id_plus_flip(n, T::one())
}

/// Orthogonal projection onto the antisymmetric subspace: `(Id - F) / 2`.
pub fn proj_anti<T: Real>(n: usize) -> BipartiteOperator<T> {
    half_id_plus_flip(n, -T::one())
}

fn half_id_plus_flip<T: Real>(n: usize, sign: T) -> BipartiteOperator<T> {
    let f = flip::<T>(n);
    let half = cast::<T>(0.5);
    let mat = ComplexMatrix::from_fn(n * n, n * n, |i, j| {
        let mut v = f.mat.at(i, j) * Complex::new(sign * half, T::zero());
        if i == j {
            v.re += half;
        }
        v
    });
    BipartiteOperator::from_parts(n, n, mat)
}

/// Unnormalized maximally entangled vector `u = sum_i e_i x e_i`, `|u|^2 = n`.
pub fn max_ent_vec<T: Real>(n: usize) -> PureVector<T> {
    assert!(n >= 1);
    let mut v = PureVector::zeros(n, n);
    for i in 0..n {
        v.data[pair(i, i, n)] = Complex::one();
    }
    v
}
