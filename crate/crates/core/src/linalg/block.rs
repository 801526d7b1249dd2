use crate::error::{Error, Result};
use crate::linalg::{svd_values, DenseMatrix, Lu};

/// Both sides of the block-inverse norm bound for `M = [[A, B], [C, D]]`:
///
/// `1/s_n(M) <= ‖A⁻¹‖ + ‖(M/A)⁻¹‖ (1 + ‖A⁻¹B‖)(1 + ‖CA⁻¹‖)`
///
/// where `M/A = D - C A⁻¹ B`. A singular `M` (or Schur complement) yields
/// `f64::INFINITY` on the corresponding side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl BlockBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

fn inverse_norm(m: &DenseMatrix) -> Result<f64> {
    let s = svd_values(m)?;
    let smin = s.smallest();
    Ok(if smin > 0.0 { 1.0 / smin } else { f64::INFINITY })
}

fn op_norm(m: &DenseMatrix) -> Result<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0.0);
    }
    Ok(svd_values(m)?.largest())
}

pub fn block_inverse_bound_check(
    a: &DenseMatrix,
    b: &DenseMatrix,
    c: &DenseMatrix,
    d: &DenseMatrix,
) -> Result<BlockBound> {
    if !a.is_square() {
        return Err(Error::NotSquare(a.rows(), a.cols()));
    }
    let m = DenseMatrix::from_blocks(a, b, c, d)?;
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    let a_inv = Lu::factor(a)?.inverse();
    let a_inv_b = a_inv.matmul(b)?;
    let c_a_inv = c.matmul(&a_inv)?;
    let mut schur = c.matmul(&a_inv_b)?;
    schur.scale(-1.0);
    let schur = schur.add(d)?;

    let lhs = inverse_norm(&m)?;
    // ‖A⁻¹‖ from A itself rather than the explicit inverse.
    let rhs = inverse_norm(a)?
        + inverse_norm(&schur)? * (1.0 + op_norm(&a_inv_b)?) * (1.0 + op_norm(&c_a_inv)?);
    Ok(BlockBound { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> DenseMatrix {
        DenseMatrix::from_diagonal(&[x])
    }

    #[test]
    fn identity_blocks() {
        let z = DenseMatrix::zeros(1, 1);
        let r = block_inverse_bound_check(&scalar(1.0), &z, &z, &scalar(1.0)).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15);
        assert!((r.rhs - 2.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_blocks() {
        let z = DenseMatrix::zeros(1, 1);
        let r = block_inverse_bound_check(&scalar(2.0), &z, &z, &scalar(4.0)).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-15);
        assert!((r.rhs - 0.75).abs() < 1e-15);
    }

    #[test]
    fn singular_a_is_error() {
        let z = DenseMatrix::zeros(1, 1);
        assert!(matches!(
            block_inverse_bound_check(&scalar(0.0), &z, &z, &scalar(1.0)),
            Err(Error::SingularMatrix)
        ));
    }
}
