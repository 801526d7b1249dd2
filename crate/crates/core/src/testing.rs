//! Independent reference implementations used by tests.
//!
//! These compute singular values as square roots of eigenvalues of the Gram
//! matrix with a two-sided cyclic Jacobi eigensolver. Squaring loses relative
//! accuracy for tiny singular values, so they suit well-conditioned inputs.

use crate::linalg::{ComplexDenseMatrix, DenseMatrix};

/// Eigenvalues of a symmetric matrix, descending.
pub fn symmetric_eigenvalues(a: &DenseMatrix) -> Vec<f64> {
    assert!(a.is_square(), "eigen-oracle needs a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| m[(i, i)] * m[(i, i)]).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Singular values of `m` from the eigenvalues of `mᵀm` (or `m mᵀ` when wide).
pub fn singular_values_oracle(m: &DenseMatrix) -> Vec<f64> {
    let mt = m.transpose();
    let gram = if m.rows() >= m.cols() {
        mt.matmul(m).expect("shapes agree")
    } else {
        m.matmul(&mt).expect("shapes agree")
    };
    symmetric_eigenvalues(&gram)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect()
}

/// Singular values of a complex matrix from the Hermitian product `mᴴ m`,
/// diagonalised through its real symmetric embedding.
pub fn complex_singular_values_oracle(m: &ComplexDenseMatrix) -> Vec<f64> {
    let (a, b) = (m.real_part(), m.imag_part());
    let (at, bt) = (a.transpose(), b.transpose());
    // (A - iB)ᵀ (A + iB) = (AᵀA + BᵀB) + i(AᵀB - BᵀA)
    let re = at.matmul(a).unwrap().add(&bt.matmul(b).unwrap()).unwrap();
    let mut neg_bta = bt.matmul(a).unwrap();
    neg_bta.scale(-1.0);
    let im = at.matmul(b).unwrap().add(&neg_bta).unwrap();
    let mut neg_im = im.clone();
    neg_im.scale(-1.0);
    let embed = DenseMatrix::from_blocks(&re, &neg_im, &im, &re).unwrap();
    let ev = symmetric_eigenvalues(&embed);
    ev.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_two_by_two() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let ev = symmetric_eigenvalues(&a);
        assert!((ev[0] - 3.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn complex_modulus() {
        let m = ComplexDenseMatrix::new(
            DenseMatrix::from_rows(&[vec![3.0]]).unwrap(),
            DenseMatrix::from_rows(&[vec![4.0]]).unwrap(),
        )
        .unwrap();
        assert!((complex_singular_values_oracle(&m)[0] - 5.0).abs() < 1e-14);
    }
}
