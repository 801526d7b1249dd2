use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, SingularSpectrum};
use crate::operator::CsrMatrix;

/// Default largest `n` that [`PerturbedOperator::to_dense`] will materialize.
pub const DEFAULT_DENSIFY_CAP: usize = 4096;

/// Factor pair `(U, V)` of a rank-`k` update `U Vᵀ`, both `n x k`,
/// row-major. A symmetric update stores only `U` and uses it as `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankUpdate {
    u: DenseMatrix,
    v: Option<DenseMatrix>,
}

impl LowRankUpdate {
    pub fn new(u: DenseMatrix, v: DenseMatrix) -> Result<Self> {
        if u.rows() != v.rows() || u.cols() != v.cols() {
            return Err(Error::InvalidInput(format!(
                "U is {}x{} but V is {}x{}",
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            )));
        }
        if u.cols() == 0 {
            return Err(Error::InvalidInput("update rank must be >= 1".into()));
        }
        Ok(Self { u, v: Some(v) })
    }

    /// `U Uᵀ`.
    pub fn symmetric(u: DenseMatrix) -> Result<Self> {
        if u.cols() == 0 {
            return Err(Error::InvalidInput("update rank must be >= 1".into()));
        }
        Ok(Self { u, v: None })
    }

    /// Rank-1 update `u vᵀ` from plain vectors.
    pub fn rank_one(u: &[f64], v: &[f64]) -> Result<Self> {
        Self::new(
            DenseMatrix::from_row_major(u.len(), 1, u.to_vec())?,
            DenseMatrix::from_row_major(v.len(), 1, v.to_vec())?,
        )
    }

    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn v(&self) -> &DenseMatrix {
        self.v.as_ref().unwrap_or(&self.u)
    }

    pub fn is_symmetric(&self) -> bool {
        self.v.is_none()
    }

    pub fn n(&self) -> usize {
        self.u.rows()
    }

    pub fn rank(&self) -> usize {
        self.u.cols()
    }

    /// `y += U (Vᵀ x)`: `n k` multiply-adds for `Vᵀ x`, `n k` for the rest.
    pub fn apply_add(&self, x: &[f64], y: &mut [f64]) {
        let k = self.rank();
        let v = self.v();
        let mut w = vec![0.0; k];
        for (xi, vrow) in x.iter().zip(v.as_slice().chunks_exact(k)) {
            for (wj, vij) in w.iter_mut().zip(vrow) {
                *wj += vij * xi;
            }
        }
        for (yi, urow) in y.iter_mut().zip(self.u.as_slice().chunks_exact(k)) {
            *yi += urow.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
        }
    }

    /// Dense `U Vᵀ`.
    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.n();
        let (u, v) = (&self.u, self.v());
        DenseMatrix::from_fn(n, n, |i, j| {
            u.row(i).iter().zip(v.row(j)).map(|(a, b)| a * b).sum()
        })
    }
}

/// Unperturbed matrix `M`.
#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    Csr(CsrMatrix),
    Dense(DenseMatrix),
    Diagonal(Vec<f64>),
}

impl Base {
    pub fn dim(&self) -> (usize, usize) {
        match self {
            Base::Csr(m) => (m.nrows(), m.ncols()),
            Base::Dense(m) => (m.rows(), m.cols()),
            Base::Diagonal(d) => (d.len(), d.len()),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Base::Csr(m) => m.is_symmetric(),
            Base::Dense(m) => m.is_symmetric(0.0),
            Base::Diagonal(_) => true,
        }
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        match self {
            Base::Csr(m) => m.matvec_into(x, y),
            Base::Dense(m) => m.matvec_into(x, y),
            Base::Diagonal(d) => {
                for ((yi, di), xi) in y.iter_mut().zip(d).zip(x) {
                    *yi = di * xi;
                }
                Ok(())
            }
        }
    }
}

/// `M + U Vᵀ`, applied without forming the dense sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedOperator {
    base: Base,
    update: Option<LowRankUpdate>,
}

impl PerturbedOperator {
    pub fn new(base: Base, update: Option<LowRankUpdate>) -> Result<Self> {
        let (r, c) = base.dim();
        if r != c {
            return Err(Error::NotSquare(r, c));
        }
        if let Some(up) = &update {
            if up.n() != r {
                return Err(Error::DimensionMismatch { expected: r, got: up.n() });
            }
        }
        if let Base::Diagonal(d) = &base {
            if d.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput("non-finite diagonal entry".into()));
            }
        }
        Ok(Self { base, update })
    }

    pub fn unperturbed(base: Base) -> Result<Self> {
        Self::new(base, None)
    }

    pub fn n(&self) -> usize {
        self.base.dim().0
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn update(&self) -> Option<&LowRankUpdate> {
        self.update.as_ref()
    }

    /// Symmetric base and, if present, a symmetric update.
    pub fn is_symmetric(&self) -> bool {
        self.base.is_symmetric() && self.update.as_ref().is_none_or(LowRankUpdate::is_symmetric)
    }

    /// `y = (M + U Vᵀ) x`, overwriting `y`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        if y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: y.len() });
        }
        self.base.apply_into(x, y)?;
        if let Some(up) = &self.update {
            up.apply_add(x, y);
        }
        Ok(())
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n()];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        self.to_dense_with_cap(DEFAULT_DENSIFY_CAP)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<DenseMatrix> {
        let n = self.n();
        if n > cap {
            return Err(Error::DensifyCap { n, cap });
        }
        let mut m = match &self.base {
            Base::Csr(c) => c.to_dense(),
            Base::Dense(d) => d.clone(),
            Base::Diagonal(d) => DenseMatrix::from_diagonal(d),
        };
        if let Some(up) = &self.update {
            let k = up.rank();
            let (u, v) = (up.u().as_slice(), up.v().as_slice());
            for i in 0..n {
                let urow = &u[i * k..(i + 1) * k];
                for j in 0..n {
                    let vrow = &v[j * k..(j + 1) * k];
                    m[(i, j)] += urow.iter().zip(vrow).map(|(a, b)| a * b).sum::<f64>();
                }
            }
        }
        Ok(m)
    }
}

/// Diagonal base `diag(s_1, ..., s_n)` whose perturbed smallest singular
/// value has the same law as for any matrix with this spectrum, under
/// rotation-invariant Gaussian factors.
pub fn diagonal_model(spectrum: &SingularSpectrum) -> Base {
    Base::Diagonal(spectrum.values().to_vec())
}

/// `det(D + u vᵀ)` for diagonal `D` whose only zero is its last entry:
/// the adjugate of `D` is zero except its corner `∏_{i<n} d_i`, so the
/// determinant is `u_n v_n ∏_{i<n} d_i`.
pub fn det_rank1_diag(d: &[f64], u: &[f64], v: &[f64]) -> Result<f64> {
    let n = d.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty diagonal".into()));
    }
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: if u.len() != n { u.len() } else { v.len() },
        });
    }
    let zeros = d.iter().filter(|x| **x == 0.0).count();
    if d[n - 1] != 0.0 || zeros != 1 {
        return Err(Error::Precondition(format!(
            "diagonal must have exactly one zero, in the last position ({zeros} zeros found)"
        )));
    }
    Ok(u[n - 1] * v[n - 1] * d[..n - 1].iter().product::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_base_rank_one() {
        let up = LowRankUpdate::rank_one(&[1.0, 2.0], &[3.0, -1.0]).unwrap();
        let op = PerturbedOperator::new(Base::Diagonal(vec![0.0, 0.0]), Some(up)).unwrap();
        let x = [1.0, 1.0];
        // (v . x) u = 2 u
        assert_eq!(op.apply(&x).unwrap(), vec![2.0, 4.0]);
    }

    #[test]
    fn identity_base() {
        let op = PerturbedOperator::unperturbed(Base::Csr(CsrMatrix::identity(3))).unwrap();
        assert_eq!(op.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert!(op.apply(&[1.0]).is_err());
    }

    #[test]
    fn to_dense_examples() {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(vec![1.0, 2.0])).unwrap();
        assert_eq!(op.to_dense().unwrap(), DenseMatrix::from_diagonal(&[1.0, 2.0]));

        let up = LowRankUpdate::rank_one(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        let op = PerturbedOperator::new(Base::Diagonal(vec![0.0, 0.0]), Some(up)).unwrap();
        let d = op.to_dense().unwrap();
        assert_eq!(d.as_slice(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn densify_cap() {
        let op = PerturbedOperator::unperturbed(Base::Diagonal(vec![1.0; 10])).unwrap();
        assert!(matches!(op.to_dense_with_cap(5), Err(Error::DensifyCap { n: 10, cap: 5 })));
    }

    #[test]
    fn shape_checks() {
        let up = LowRankUpdate::rank_one(&[1.0; 3], &[1.0; 3]).unwrap();
        assert!(PerturbedOperator::new(Base::Diagonal(vec![1.0; 2]), Some(up)).is_err());
        assert!(PerturbedOperator::new(Base::Dense(DenseMatrix::zeros(2, 3)), None).is_err());
        assert!(LowRankUpdate::new(DenseMatrix::zeros(3, 1), DenseMatrix::zeros(3, 2)).is_err());
        assert!(LowRankUpdate::new(DenseMatrix::zeros(3, 0), DenseMatrix::zeros(3, 0)).is_err());
    }

    #[test]
    fn symmetric_update_aliases() {
        let u = DenseMatrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64);
        let up = LowRankUpdate::symmetric(u.clone()).unwrap();
        assert!(up.is_symmetric());
        assert_eq!(up.v(), &u);
        assert!(up.to_dense().is_symmetric(0.0));
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_rank1_diag(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(
            det_rank1_diag(&[2.0, 3.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 1.0]).unwrap(),
            6.0
        );
        assert!(det_rank1_diag(&[0.0, 0.0], &[1.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(det_rank1_diag(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn diagonal_model_of_spectrum() {
        let s = SingularSpectrum::new(vec![1.0, 0.0], 0.0).unwrap();
        let op = PerturbedOperator::unperturbed(diagonal_model(&s)).unwrap();
        assert_eq!(op.to_dense().unwrap(), DenseMatrix::from_diagonal(&[1.0, 0.0]));
    }
}
