//! Schmidt decomposition of pure bipartite vectors, seeded random ensembles,
//! and the constructive rank certificates for the lift/compress maps.
//!
//! Randomness is ChaCha8 keyed by a user seed. Independent trials use ChaCha
//! streams: trial `i` of a batch draws from stream `i + 1` of the same key,
//! stream 0 being reserved for single-shot generators. This makes every
//! ensemble bit-reproducible across platforms.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bipartite::{BipartiteOperator, PureVector};
use crate::embedding::EmbeddingPair;
use crate::error::{Error, Result};
use crate::linalg::{svd, ComplexMatrix};
use crate::scalar::{cast, Real};

/// Schmidt data of a pure vector: `v = sum_i s_i (left_i x right_i)` with the
/// coefficients positive descending and both vector families orthonormal.
#[derive(Debug, Clone)]
pub struct SchmidtDecomp<T> {
    /// All singular values of the coefficient matrix, descending.
    pub coefficients: Vec<T>,
    /// Columns are the left Schmidt vectors.
    pub left: ComplexMatrix<T>,
    /// Columns are the right Schmidt vectors (conjugated so the expansion
    /// reads as a plain tensor product).
    pub right: ComplexMatrix<T>,
    /// Count of coefficients above `rank_tol` times the largest.
    pub rank: usize,
}

impl<T: Real> SchmidtDecomp<T> {
    /// Smallest coefficient still counted in the rank.
    pub fn smallest_retained(&self) -> T {
        self.coefficients[self.rank - 1]
    }

    /// Largest coefficient below the rank cutoff, if any.
    pub fn largest_discarded(&self) -> Option<T> {
        self.coefficients.get(self.rank).copied()
    }

    pub fn reconstruct(&self, dim_a: usize, dim_b: usize) -> PureVector<T> {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); dim_a * dim_b];
        for (i, &s) in self.coefficients.iter().enumerate() {
            let w = Complex::new(s, T::zero());
            for a in 0..dim_a {
                for b in 0..dim_b {
                    coeffs[a * dim_b + b] += w * self.left.at(a, i) * self.right.at(b, i);
                }
            }
        }
        PureVector::new(dim_a, dim_b, coeffs).expect("dimensions fixed above")
    }
}

/// Schmidt-decomposes `v` by reshaping it into its `dimA x dimB` coefficient
/// matrix and taking the SVD.
pub fn schmidt_decompose<T: Real>(v: &PureVector<T>, rank_tol: T) -> Result<SchmidtDecomp<T>> {
    if v.norm() == T::zero() {
        return Err(Error::ZeroVector);
    }
    let f = svd(&v.as_matrix())?;
    let cutoff = rank_tol * f.s[0];
    let rank = f.s.iter().filter(|&&s| s > cutoff).count();
    Ok(SchmidtDecomp {
        coefficients: f.s,
        left: f.u,
        right: f.v.conj(),
        rank,
    })
}

/// Named random ensembles, fully determined by their fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    GinibreDensity,
    PureRank,
    SeparableMixture,
}

/// Recipe for a reproducible random draw.
#[derive(Debug, Clone, Copy)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub k: usize,
    pub m: usize,
    /// Schmidt rank for pure draws, spectrum rank for Ginibre draws.
    pub rank: usize,
    /// Number of product terms in a separable mixture.
    pub terms: usize,
    pub seed: u64,
}

/// A draw from one of the named ensembles.
#[derive(Debug, Clone)]
pub enum Sample<T> {
    Density(BipartiteOperator<T>),
    Pure(PureVector<T>),
}

impl EnsembleSpec {
    pub fn draw<T: Real>(&self) -> Result<Sample<T>> {
        match self.kind {
            EnsembleKind::GinibreDensity => {
                Ok(Sample::Density(random_density(self.k, self.m, self.rank, self.seed)?))
            }
            EnsembleKind::PureRank => {
                Ok(Sample::Pure(random_pure(self.k, self.m, self.rank, self.seed)?))
            }
            EnsembleKind::SeparableMixture => Ok(Sample::Density(separable_mixture(
                self.k, self.m, self.terms, self.seed,
            )?)),
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(cast(re), cast(im))
}

fn gaussian_matrix<T: Real>(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Orthonormalizes the columns of a random Gaussian matrix (two passes of
/// modified Gram-Schmidt; redraws a column in the measure-zero event of a
/// near-dependent draw).
fn random_orthonormal<T: Real>(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<T> {
    assert!(cols <= rows);
    let mut q = ComplexMatrix::zeros(rows, cols);
    let mut placed = 0usize;
    while placed < cols {
        let mut col: Vec<Complex<T>> = (0..rows).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for j in 0..placed {
                let mut overlap = Complex::new(T::zero(), T::zero());
                for (i, &x) in col.iter().enumerate() {
                    overlap += q.at(i, j).conj() * x;
                }
                for (i, x) in col.iter_mut().enumerate() {
                    *x = *x - q.at(i, j) * overlap;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
        if norm < cast(1e-6) {
            continue;
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        for x in col.iter_mut() {
            *x = *x * inv;
        }
        q.set_column(placed, &col);
        placed += 1;
    }
    q
}

fn random_pure_with<T: Real>(k: usize, m: usize, r: usize, rng: &mut ChaCha8Rng) -> PureVector<T> {
    let left = random_orthonormal::<T>(k, r, rng);
    let right = random_orthonormal::<T>(m, r, rng);
    // coefficients in [1, 2]: rank-r with a wide margin above any cutoff
    let coeffs: Vec<T> = (0..r).map(|_| T::one() + cast(rng.gen::<f64>())).collect();
    let mut data = vec![Complex::new(T::zero(), T::zero()); k * m];
    for (i, &c) in coeffs.iter().enumerate() {
        let w = Complex::new(c, T::zero());
        for a in 0..k {
            for b in 0..m {
                data[a * m + b] += w * left.at(a, i) * right.at(b, i);
            }
        }
    }
    let v = PureVector::from_parts(k, m, data);
    let norm = v.norm();
    v.scale(T::one() / norm)
}

/// Random unit vector of Schmidt rank exactly `r` on `C^k (x) C^m`.
pub fn random_pure<T: Real>(k: usize, m: usize, r: usize, seed: u64) -> Result<PureVector<T>> {
    let max = k.min(m);
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { rank: r, max });
    }
    Ok(random_pure_with(k, m, r, &mut rng_for(seed, 0)))
}

/// Ginibre density matrix: `G G* / tr(G G*)` with `G` a `(km) x rank` matrix
/// of independent standard complex Gaussians.
pub fn random_density<T: Real>(k: usize, m: usize, rank: usize, seed: u64) -> Result<BipartiteOperator<T>> {
    let max = k * m;
    if rank == 0 || rank > max {
        return Err(Error::RankOutOfRange { rank, max });
    }
    let mut rng = rng_for(seed, 0);
    let g = gaussian_matrix::<T>(max, rank, &mut rng);
    let gg = (&g * &g.adjoint()).hermitian_part();
    let op = BipartiteOperator::new(k, m, gg)?;
    op.normalize_trace(T::one())
}

/// Convex mixture of random pure product states.
pub fn separable_mixture<T: Real>(k: usize, m: usize, terms: usize, seed: u64) -> Result<BipartiteOperator<T>> {
    if terms == 0 {
        return Err(Error::RankOutOfRange { rank: 0, max: usize::MAX });
    }
    let mut rng = rng_for(seed, 0);
    let mut mat = ComplexMatrix::zeros(k * m, k * m);
    for _ in 0..terms {
        let a = random_orthonormal::<T>(k, 1, &mut rng).column(0);
        let b = random_orthonormal::<T>(m, 1, &mut rng).column(0);
        let weight = cast::<T>(rng.gen::<f64>() + 0.1);
        let prod = PureVector::tensor(&a, &b);
        let proj = prod.projector();
        mat = &mat + &proj.mat().scale(weight);
    }
    BipartiteOperator::new(k, m, mat)?.normalize_trace(T::one())
}

/// Pass/fail summary of the rank-map certificates, with worst-case margins of
/// the rank decisions relative to the cutoff `rank_tol * s_max`.
#[derive(Debug, Clone)]
pub struct RankMapReport<T> {
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    /// Smallest retained coefficient over the cutoff, minimized over trials.
    pub worst_retained_margin: T,
    /// Largest discarded coefficient over the cutoff, maximized over trials.
    pub worst_discarded_margin: T,
}

/// Certifies, over `trials_per_rank` seeded draws for every admissible rank
/// `r`, that the lift by `C` preserves the Schmidt rank, the lift by `Q`
/// doubles it, and compression by `C*` halves it back.
pub fn certify_rank_maps<T: Real>(
    pair: &EmbeddingPair<T>,
    trials_per_rank: usize,
    seed: u64,
) -> Result<RankMapReport<T>> {
    let (k, m) = (pair.k(), pair.m());
    let rmax = k.min(m);
    let rank_tol = T::RANK_TOL;
    let mut report = RankMapReport {
        trials: 0,
        passes: 0,
        failures: 0,
        worst_retained_margin: T::infinity(),
        worst_discarded_margin: T::zero(),
    };
    for r in 1..=rmax {
        for t in 0..trials_per_rank {
            let stream = ((r - 1) * trials_per_rank + t + 1) as u64;
            let v = random_pure_with::<T>(k, m, r, &mut rng_for(seed, stream));
            report.trials += 1;

            let mut ok = true;
            for (vec, expected) in [
                (pair.lift_c(&v)?, r),
                (pair.lift_q(&v)?, 2 * r),
                (pair.compress(&pair.lift_q(&v)?)?, r),
            ] {
                let dec = schmidt_decompose(&vec, rank_tol)?;
                ok &= dec.rank == expected;
                let cutoff = rank_tol * dec.coefficients[0];
                report.worst_retained_margin = report
                    .worst_retained_margin
                    .min(dec.smallest_retained() / cutoff);
                if let Some(d) = dec.largest_discarded() {
                    report.worst_discarded_margin = report.worst_discarded_margin.max(d / cutoff);
                }
            }
            if ok {
                report.passes += 1;
            } else {
                report.failures += 1;
            }
        }
    }
    Ok(report)
}
