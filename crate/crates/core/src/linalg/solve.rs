use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Pivots below this magnitude are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// LU factorization with partial pivoting, `P m = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // L (unit lower, below diagonal) and U packed together, row-major.
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare(m.rows(), m.cols()));
        }
        if !m.is_finite() {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let n = m.rows();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot < PIVOT_FLOOR {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= factor * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, swaps })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: b.len() });
        }
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        Ok(x)
    }

    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let prod: f64 = (0..n).map(|i| self.lu[i * n + i]).product();
        if self.swaps.is_multiple_of(2) {
            prod
        } else {
            -prod
        }
    }

    pub fn inverse(&self) -> DenseMatrix {
        let n = self.n;
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            // Dimensions match by construction.
            let col = self.solve(&e).expect("square solve");
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        inv
    }
}

/// Solves `m x = b` by partial-pivoted elimination.
pub fn solve_dense(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if m.is_square() && b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    Lu::factor(m)?.solve(b)
}

/// Determinant by elimination; 0 for matrices singular to working precision.
pub fn determinant(m: &DenseMatrix) -> Result<f64> {
    match Lu::factor(m) {
        Ok(lu) => Ok(lu.determinant()),
        Err(Error::SingularMatrix) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_solve() {
        let b = vec![1.0, -2.0, 3.5];
        assert_eq!(solve_dense(&DenseMatrix::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn diagonal_solve() {
        let m = DenseMatrix::from_diagonal(&[2.0, 4.0]);
        assert_eq!(solve_dense(&m, &[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
    }

    #[test]
    fn singular_is_error() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(solve_dense(&m, &[1.0, 1.0]), Err(Error::SingularMatrix)));
        assert!(matches!(
            solve_dense(&DenseMatrix::zeros(2, 3), &[1.0, 1.0]),
            Err(Error::NotSquare(2, 3))
        ));
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(determinant(&m).unwrap(), -1.0);
        let m = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        assert!((determinant(&m).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_times_matrix() {
        let m = DenseMatrix::from_fn(4, 4, |i, j| if i == j { 4.0 } else { 1.0 / (1 + i + j) as f64 });
        let inv = Lu::factor(&m).unwrap().inverse();
        let p = m.matmul(&inv).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[(i, j)] - e).abs() < 1e-14);
            }
        }
    }
}
