//! The embedding of states on `C^k (x) C^m` into operators on
//! `C^(k+m) (x) C^(k+m)`.
//!
//! `C` places the first factor into the leading k coordinates and the second
//! factor into the trailing m coordinates of `C^(k+m)`; `Q = P_anti C`
//! compresses the image into the antisymmetric subspace. The map
//!
//! `T(gamma) = tr(Q gamma Q*) P_sym + eps * Q gamma Q*`,  `0 < eps <= 1/6`,
//!
//! sends every state to an operator whose partial transpose and realigned
//! partial transpose are both positive definite, sitting in a trace-norm ball
//! of radius `eps` around the symmetric projector after normalization.

use num_complex::Complex;
use num_traits::One;

use crate::bipartite::{proj_anti, proj_sym, BipartiteOperator, PureVector};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, operator_norm, ComplexMatrix};
use crate::scalar::{cast, Real};

/// Relative Hermiticity tolerance applied to user-supplied states.
const STATE_HERM_TOL: f64 = 1e-8;
/// Relative slack below zero allowed for the smallest eigenvalue of a state.
const STATE_PSD_SLACK: f64 = 1e-10;

/// The pair of structure matrices for given factor dimensions `(k, m)`.
///
/// `C` is a coordinate isometry (`C* C = Id`), `Q = P_anti C` satisfies
/// `C* Q = Id / 2`, and both are exact in floating point (entries 0, 1, 1/2).
#[derive(Debug, Clone)]
pub struct EmbeddingPair<T: Real> {
    k: usize,
    m: usize,
    c: ComplexMatrix<T>,
    q: ComplexMatrix<T>,
    p_sym: BipartiteOperator<T>,
}

impl<T: Real> EmbeddingPair<T> {
    pub fn new(k: usize, m: usize) -> Self {
        assert!(k >= 1 && m >= 1, "factor dimensions must be positive");
        let n = k + m;
        let side = n * n;
        let cols = k * m;
        let mut c = ComplexMatrix::zeros(side, cols);
        for a in 0..k {
            for b in 0..m {
                c.set(a * n + (k + b), a * m + b, Complex::one());
            }
        }
        let q = proj_anti::<T>(n).mat().matmul(&c);
        Self {
            k,
            m,
            c,
            q,
            p_sym: proj_sym(n),
        }
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Side of the enlarged single factor, `k + m`.
    #[inline]
    pub fn n(&self) -> usize {
        self.k + self.m
    }

    pub fn c(&self) -> &ComplexMatrix<T> {
        &self.c
    }

    pub fn q(&self) -> &ComplexMatrix<T> {
        &self.q
    }

    pub fn p_sym(&self) -> &BipartiteOperator<T> {
        &self.p_sym
    }

    /// `C v`: lifts a vector on `C^k (x) C^m` to `C^(k+m) (x) C^(k+m)`.
    pub fn lift_c(&self, v: &PureVector<T>) -> Result<PureVector<T>> {
        self.check_small_dims(v)?;
        let n = self.n();
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n * n];
        for a in 0..self.k {
            for b in 0..self.m {
                coeffs[a * n + (self.k + b)] = v.at(a, b);
            }
        }
        PureVector::new(n, n, coeffs)
    }

    /// `Q v = P_anti C v`.
    pub fn lift_q(&self, v: &PureVector<T>) -> Result<PureVector<T>> {
        let lifted = self.lift_c(v)?;
        let n = self.n();
        let half = cast::<T>(0.5);
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n * n];
        for alpha in 0..n {
            for beta in 0..n {
                let z = (lifted.at(alpha, beta) - lifted.at(beta, alpha)) * Complex::new(half, T::zero());
                coeffs[alpha * n + beta] = z;
            }
        }
        PureVector::new(n, n, coeffs)
    }

    /// `C* v`: compresses a vector on the enlarged system back to `C^k (x) C^m`.
    ///
    /// Evaluation never fails; the Schmidt-halving contract additionally needs
    /// `v` inside the wedge of the two coordinate blocks, see
    /// [`Self::wedge_residual`].
    pub fn compress(&self, v: &PureVector<T>) -> Result<PureVector<T>> {
        self.check_big_dims(v)?;
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); self.k * self.m];
        for a in 0..self.k {
            for b in 0..self.m {
                coeffs[a * self.m + b] = v.at(a, self.k + b);
            }
        }
        PureVector::new(self.k, self.m, coeffs)
    }

    /// Relative distance of `v` from the wedge subspace spanned by
    /// `(a x 0) ^ (0 x b)`; its orthogonal projector is `2 Q Q*`.
    pub fn wedge_residual(&self, v: &PureVector<T>) -> Result<T> {
        self.check_big_dims(v)?;
        let norm = v.norm();
        if norm == T::zero() {
            return Ok(T::zero());
        }
        let qs = self.q.adjoint().apply(v.coeffs());
        let back = self.q.apply(&qs);
        let two = T::one() + T::one();
        let mut dev = T::zero();
        for (p, &orig) in back.iter().zip(v.coeffs()) {
            dev += (*p * Complex::new(two, T::zero()) - orig).norm_sqr();
        }
        Ok(dev.sqrt() / norm)
    }

    /// `Q gamma Q*`: embeds a state into the antisymmetric subspace of the
    /// enlarged system.
    pub fn embed_state(&self, gamma: &BipartiteOperator<T>) -> Result<BipartiteOperator<T>> {
        self.check_state_dims(gamma)?;
        check_state(gamma)?;
        let qg = self.q.matmul(gamma.mat());
        let mat = qg.matmul(&self.q.adjoint());
        Ok(BipartiteOperator::new(self.n(), self.n(), mat)?)
    }

    /// `T(gamma) = tr(Q gamma Q*) P_sym + eps Q gamma Q*`.
    pub fn embed_t(&self, gamma: &BipartiteOperator<T>, eps: T) -> Result<BipartiteOperator<T>> {
        check_epsilon(eps)?;
        let image = self.embed_state(gamma)?;
        let tr = image.trace().re;
        let mat = &self.p_sym.mat().scale(tr) + &image.mat().scale(eps);
        Ok(BipartiteOperator::new(self.n(), self.n(), mat)?)
    }

    /// Trace-norm distance of the trace-normalized embedded state from the
    /// symmetric projector: equals `eps` exactly for every state.
    pub fn distance_to_sym(&self, gamma: &BipartiteOperator<T>, eps: T) -> Result<T> {
        check_epsilon(eps)?;
        let image = self.embed_state(gamma)?;
        let tr = image.trace().re;
        if tr <= T::zero() {
            return Err(Error::ZeroState);
        }
        // T(gamma)/tr - P_sym collapses to eps * image / tr; trace norm via spectrum
        let diff = image.mat().scale(eps / tr);
        let eig = hermitian_eig(&diff, T::EIG_TOL * cast(1e2))?;
        Ok(eig.eigenvalues.iter().fold(T::zero(), |acc, &l| acc + l.abs()))
    }

    /// Embeds, applies `T`, and verifies the positivity certificates, filling
    /// in the embedded-context diagnostics of the report.
    pub fn verify_embedded(&self, gamma: &BipartiteOperator<T>, eps: T, tol: T) -> Result<SpcReport<T>> {
        check_epsilon(eps)?;
        let image = self.embed_state(gamma)?;
        let tr = image.trace().re;
        if tr <= T::zero() {
            return Err(Error::ZeroState);
        }
        let t_mat = &self.p_sym.mat().scale(tr) + &image.mat().scale(eps);
        let t_op = BipartiteOperator::new(self.n(), self.n(), t_mat)?;
        let mut report = verify_spc(&t_op, tol)?;

        let pt_norm = operator_norm(image.partial_transpose().mat())?;
        let marginal_norm = operator_norm(&image.marginal_a())?;
        report.trace_q_part = Some(tr);
        report.pt_norm = Some(pt_norm);
        report.marginal_norm = Some(marginal_norm);
        report.eps_bound_lhs = Some(eps * pt_norm / tr);
        report.distance_to_sym = Some(self.distance_to_sym(gamma, eps)?);
        Ok(report)
    }
}

impl<T: Real> EmbeddingPair<T> {
    fn check_small_dims(&self, v: &PureVector<T>) -> Result<()> {
        if (v.dim_a(), v.dim_b()) != (self.k, self.m) {
            return Err(Error::DimensionMismatch(format!(
                "vector lives on {}x{}, embedding expects {}x{}",
                v.dim_a(),
                v.dim_b(),
                self.k,
                self.m
            )));
        }
        Ok(())
    }

    fn check_big_dims(&self, v: &PureVector<T>) -> Result<()> {
        let n = self.n();
        if (v.dim_a(), v.dim_b()) != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "vector lives on {}x{}, compression expects {n}x{n}",
                v.dim_a(),
                v.dim_b()
            )));
        }
        Ok(())
    }

    fn check_state_dims(&self, gamma: &BipartiteOperator<T>) -> Result<()> {
        if (gamma.dim_a(), gamma.dim_b()) != (self.k, self.m) {
            return Err(Error::DimensionMismatch(format!(
                "state lives on {}x{}, embedding expects {}x{}",
                gamma.dim_a(),
                gamma.dim_b(),
                self.k,
                self.m
            )));
        }
        Ok(())
    }
}

/// Validates a density-operator input: nonzero, Hermitian, positive
/// semidefinite up to a relative slack of `1e-10`.
pub(crate) fn check_state<T: Real>(gamma: &BipartiteOperator<T>) -> Result<()> {
    if gamma.max_abs() == T::zero() {
        return Err(Error::ZeroState);
    }
    let eig = hermitian_eig(gamma.mat(), cast(STATE_HERM_TOL))?;
    let n = eig.eigenvalues.len();
    let lambda_min = eig.eigenvalues[0];
    let lambda_max = eig.eigenvalues[n - 1];
    if lambda_min < -cast::<T>(STATE_PSD_SLACK) * lambda_max.abs() {
        return Err(Error::NotAState {
            lambda_min: lambda_min.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

pub(crate) fn check_epsilon<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps <= T::EPS_MAX {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps.to_f64().unwrap_or(f64::NAN)))
    }
}

/// Positivity certificates of a bipartite operator under partial transpose
/// and realignment, plus embedded-pipeline diagnostics when available.
#[derive(Debug, Clone)]
pub struct SpcReport<T> {
    /// Smallest eigenvalue of the partial transpose.
    pub lambda_min_pt: T,
    /// Smallest eigenvalue of the Hermitian part of the realigned partial
    /// transpose.
    pub lambda_min_realign_pt: T,
    /// Relative deviation of the realigned partial transpose from Hermitian.
    pub realign_residual: T,
    /// Spectral radius of the partial transpose (threshold scale).
    pub spectral_scale_pt: T,
    /// Spectral radius of the realigned partial transpose (threshold scale).
    pub spectral_scale_realign: T,
    /// Strict positivity of the partial transpose at the given tolerance.
    pub ppt: bool,
    /// Strict positivity of both certificates at the given tolerance.
    pub spc: bool,
    /// `tr(Q gamma Q*)` when produced through an embedding.
    pub trace_q_part: Option<T>,
    /// `eps * |(Q gamma Q*)^PT| / tr(Q gamma Q*)`, bounded by `eps`.
    pub eps_bound_lhs: Option<T>,
    /// Operator norm of `(Q gamma Q*)^PT`.
    pub pt_norm: Option<T>,
    /// Operator norm of the A marginal of `Q gamma Q*`.
    pub marginal_norm: Option<T>,
    /// Trace-norm distance of the normalized embedded state from `P_sym`.
    pub distance_to_sym: Option<T>,
}

/// Computes the PPT/SPC certificates of a Hermitian operator with equal
/// factor dimensions. Strict positivity is flagged against
/// `tol * spectral radius` of the matrix under test, so boundary cases such
/// as `Id/n^2` (whose realigned partial transpose has eigenvalue zero) are
/// not reported as strictly positive.
pub fn verify_spc<T: Real>(delta: &BipartiteOperator<T>, tol: T) -> Result<SpcReport<T>> {
    if delta.dim_a() != delta.dim_b() {
        return Err(Error::DimensionMismatch(
            "certificates need equal factor dimensions".into(),
        ));
    }
    let scale = delta.max_abs();
    let herm_res = delta.mat().hermitian_residual();
    if scale > T::zero() && herm_res > cast::<T>(STATE_HERM_TOL) * scale {
        return Err(Error::NotHermitian {
            residual: (herm_res / scale).to_f64().unwrap_or(f64::NAN),
            tol: STATE_HERM_TOL,
        });
    }

    let pt = delta.partial_transpose();
    let eig_pt = hermitian_eig(pt.mat(), cast(STATE_HERM_TOL))?;
    let n_pt = eig_pt.eigenvalues.len();
    let lambda_min_pt = eig_pt.eigenvalues[0];
    let spectral_scale_pt = eig_pt.eigenvalues[0].abs().max(eig_pt.eigenvalues[n_pt - 1].abs());

    let realigned = BipartiteOperator::new(delta.dim_a(), delta.dim_a(), pt.realign())?;
    let r_scale = realigned.max_abs();
    let realign_residual = if r_scale > T::zero() {
        realigned.mat().hermitian_residual() / r_scale
    } else {
        T::zero()
    };
    let r_herm = realigned.mat().hermitian_part();
    let eig_r = hermitian_eig(&r_herm, cast(1.0))?;
    let n_r = eig_r.eigenvalues.len();
    let lambda_min_realign_pt = eig_r.eigenvalues[0];
    let spectral_scale_realign = eig_r.eigenvalues[0].abs().max(eig_r.eigenvalues[n_r - 1].abs());

    let ppt = lambda_min_pt > tol * spectral_scale_pt;
    let spc = ppt && lambda_min_realign_pt > tol * spectral_scale_realign;

    Ok(SpcReport {
        lambda_min_pt,
        lambda_min_realign_pt,
        realign_residual,
        spectral_scale_pt,
        spectral_scale_realign,
        ppt,
        spc,
        trace_q_part: None,
        eps_bound_lhs: None,
        pt_norm: None,
        marginal_norm: None,
        distance_to_sym: None,
    })
}
