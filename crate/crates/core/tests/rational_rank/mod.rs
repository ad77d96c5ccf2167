//! Exact rank oracle over the complex rationals, independent of the SVD path
//! it cross-checks. Test cases use dyadic entries (numerator over a power of
//! two) so the `f64` matrix handed to the numerical kernel carries exactly
//! the same values the oracle eliminates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spcform::linalg::ComplexMatrix;
use spcform::scalar::complex;

/// Complex number with rational components.
#[derive(Debug, Clone, PartialEq)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    fn zero() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, other: &Self) -> Self {
        CRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn add(&self, other: &Self) -> Self {
        CRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        CRat {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    fn div(&self, other: &Self) -> Self {
        let denom = &other.re * &other.re + &other.im * &other.im;
        CRat {
            re: (&self.re * &other.re + &self.im * &other.im) / &denom,
            im: (&self.im * &other.re - &self.re * &other.im) / &denom,
        }
    }

    fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }
}

/// Rank by Gaussian elimination over the field of complex rationals.
pub fn exact_rank(mut rows: Vec<Vec<CRat>>) -> usize {
    let n = rows.len();
    if n == 0 {
        return 0;
    }
    let m = rows[0].len();
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..m {
        // largest-magnitude-free exact pivoting: any nonzero entry works
        let pivot = (row..n).find(|&r| !rows[r][col].is_zero());
        let Some(p) = pivot else { continue };
        rows.swap(row, p);
        for r2 in (row + 1)..n {
            if rows[r2][col].is_zero() {
                continue;
            }
            let factor = rows[r2][col].div(&rows[row][col]);
            for c in col..m {
                let delta = factor.mul(&rows[row][c]);
                rows[r2][c] = rows[r2][c].sub(&delta);
            }
            debug_assert!(rows[r2][col].is_zero());
        }
        rank += 1;
        row += 1;
        if row == n {
            break;
        }
    }
    rank
}

fn dyadic(rng: &mut ChaCha8Rng) -> BigRational {
    let p = rng.gen_range(-8i64..=8);
    let k = rng.gen_range(0u32..=2);
    BigRational::new(BigInt::from(p), BigInt::from(1i64 << k))
}

fn dyadic_crat(rng: &mut ChaCha8Rng) -> CRat {
    CRat {
        re: dyadic(rng),
        im: dyadic(rng),
    }
}

fn matmul(a: &[Vec<CRat>], b: &[Vec<CRat>]) -> Vec<Vec<CRat>> {
    let n = a.len();
    let inner = b.len();
    let m = b[0].len();
    let mut out = vec![vec![CRat::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                let d = a[i][k].mul(&b[k][j]);
                out[i][j] = out[i][j].add(&d);
            }
        }
    }
    out
}

fn to_f64_matrix(rows: &[Vec<CRat>]) -> ComplexMatrix<f64> {
    let n = rows.len();
    let m = rows[0].len();
    ComplexMatrix::from_fn(n, m, |i, j| {
        let (re, im) = rows[i][j].to_f64();
        complex(re, im)
    })
}

/// Draws one rational test case: either a dense dyadic matrix, a low-rank
/// product, or a low-rank product with a duplicated row. Returns the exactly
/// representable `f64` matrix and its exact rank.
pub fn random_rational_case(seed: u64) -> (ComplexMatrix<f64>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1usize..=8);
    let m = rng.gen_range(1usize..=8);
    let mode = rng.gen_range(0u8..3);
    let rows: Vec<Vec<CRat>> = match mode {
        0 => (0..n)
            .map(|_| (0..m).map(|_| dyadic_crat(&mut rng)).collect())
            .collect(),
        _ => {
            let r = rng.gen_range(1usize..=n.min(m));
            let left: Vec<Vec<CRat>> = (0..n)
                .map(|_| (0..r).map(|_| dyadic_crat(&mut rng)).collect())
                .collect();
            let right: Vec<Vec<CRat>> = (0..r)
                .map(|_| (0..m).map(|_| dyadic_crat(&mut rng)).collect())
                .collect();
            let mut prod = matmul(&left, &right);
            if mode == 2 && n >= 2 {
                let src = rng.gen_range(0..n);
                let dst = rng.gen_range(0..n);
                let copied = prod[src].clone();
                prod[dst] = copied;
            }
            prod
        }
    };
    let rank = exact_rank(rows.clone());
    // dyadic values of this size round-trip through f64 exactly
    for row in &rows {
        for e in row {
            assert!(e.re.denom().abs() <= BigInt::from(1i64 << 30));
        }
    }
    (to_f64_matrix(&rows), rank)
}
