//! Structured test matrices.

use crate::error::{Error, Result};
use crate::linalg::{svd_values, DenseMatrix, SINGULAR_RELATIVE};
use crate::operator::CsrMatrix;
use crate::rng::Seed;

/// Ones on the anti-diagonal and on the first and third diagonals above it:
/// entry `(i, j)` (1-based) is 1 iff `i + j ∈ {n+1, n, n-2}`.
///
/// Its smallest singular value decays geometrically in `n` while the second
/// smallest stays bounded away from zero.
pub fn gen_antidiag(n: usize) -> Result<CsrMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be >= 1".into()));
    }
    let mut triplets = Vec::with_capacity(3 * n);
    for i in 1..=n {
        for j in 1..=n {
            let s = i + j;
            if s == n + 1 || s == n || s + 2 == n {
                triplets.push((i - 1, j - 1, 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, triplets)
}

/// `L · diag(0, 1, ..., 1)` where `L` rotates coordinates 1 and 2 by 45°.
pub fn rademacher_base(n: usize) -> Result<DenseMatrix> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DenseMatrix::from_diagonal(&(0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect::<Vec<_>>());
    // Column 0 is zero, so only column 1 picks up the rotation.
    m[(0, 1)] = -h;
    m[(1, 1)] = h;
    Ok(m)
}

/// `M + u vᵀ` for the given sign vectors, and whether it is numerically singular.
pub fn rademacher_counterexample_with(u: &[f64], v: &[f64]) -> Result<(DenseMatrix, bool)> {
    let n = u.len();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    let mut m = rademacher_base(n)?;
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] += u[i] * v[j];
        }
    }
    let spec = svd_values(&m)?;
    let singular = spec.smallest() < SINGULAR_RELATIVE * spec.largest();
    Ok((m, singular))
}

/// Samples Rademacher `u`, `v` and perturbs [`rademacher_base`]. Singular
/// exactly when `u_1 = -u_2`, so with probability 1/2.
pub fn rademacher_counterexample(n: usize, seed: Seed) -> Result<(DenseMatrix, bool)> {
    let mut rng = seed.rng();
    let u = rng.rademacher_vec(n);
    let v = rng.rademacher_vec(n);
    rademacher_counterexample_with(&u, &v)
}
