use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Complex matrix held as separate real and imaginary row-major parts.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDenseMatrix {
    re: DenseMatrix,
    im: DenseMatrix,
}

impl ComplexDenseMatrix {
    pub fn new(re: DenseMatrix, im: DenseMatrix) -> Result<Self> {
        if re.rows() != im.rows() || re.cols() != im.cols() {
            return Err(Error::InvalidInput(format!(
                "real part is {}x{} but imaginary part is {}x{}",
                re.rows(),
                re.cols(),
                im.rows(),
                im.cols()
            )));
        }
        Ok(Self { re, im })
    }

    pub fn from_real(re: DenseMatrix) -> Self {
        let im = DenseMatrix::zeros(re.rows(), re.cols());
        Self { re, im }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            re: DenseMatrix::zeros(rows, cols),
            im: DenseMatrix::zeros(rows, cols),
        }
    }

    pub fn rows(&self) -> usize {
        self.re.rows()
    }

    pub fn cols(&self) -> usize {
        self.re.cols()
    }

    pub fn real_part(&self) -> &DenseMatrix {
        &self.re
    }

    pub fn imag_part(&self) -> &DenseMatrix {
        &self.im
    }

    pub fn get(&self, i: usize, j: usize) -> (f64, f64) {
        (self.re[(i, j)], self.im[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, (re, im): (f64, f64)) {
        self.re[(i, j)] = re;
        self.im[(i, j)] = im;
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// Plain product `self * other` (no conjugation).
    pub fn matmul(&self, other: &ComplexDenseMatrix) -> Result<ComplexDenseMatrix> {
        let rr = self.re.matmul(&other.re)?;
        let ii = self.im.matmul(&other.im)?;
        let ri = self.re.matmul(&other.im)?;
        let ir = self.im.matmul(&other.re)?;
        let mut re = rr;
        re.as_mut_slice()
            .iter_mut()
            .zip(ii.as_slice())
            .for_each(|(a, b)| *a -= b);
        let im = ri.add(&ir)?;
        Ok(Self { re, im })
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        Self {
            re: self.re.transpose(),
            im: self.im.transpose(),
        }
    }

    pub fn add(&self, other: &ComplexDenseMatrix) -> Result<ComplexDenseMatrix> {
        Ok(Self {
            re: self.re.add(&other.re)?,
            im: self.im.add(&other.im)?,
        })
    }

    /// Real embedding `[[Re, -Im], [Im, Re]]`; its singular values are
    /// those of `self`, each appearing twice.
    pub fn real_embedding(&self) -> DenseMatrix {
        let (m, n) = (self.rows(), self.cols());
        DenseMatrix::from_fn(2 * m, 2 * n, |i, j| match (i < m, j < n) {
            (true, true) => self.re[(i, j)],
            (true, false) => -self.im[(i, j - n)],
            (false, true) => self.im[(i - m, j)],
            (false, false) => self.re[(i - m, j - n)],
        })
    }
}
