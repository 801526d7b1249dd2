//! Singular values by one-sided (Hestenes) Jacobi iteration.
//!
//! Columns of the working matrix are rotated pairwise until they are
//! mutually orthogonal; the singular values are then the column norms. The
//! method computes small singular values to high relative accuracy, which
//! matters here because the smallest one is the quantity under study.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::dense::{dot, norm2};
use crate::linalg::{ComplexDenseMatrix, DenseMatrix};

const MAX_SWEEPS: usize = 80;
const BASE_TOL: f64 = 1e-14;

/// Descending singular values with an a posteriori absolute error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
    accuracy: f64,
}

impl SingularSpectrum {
    pub fn new(values: Vec<f64>, accuracy: f64) -> Result<Self> {
        if !(accuracy >= 0.0) || !accuracy.is_finite() {
            return Err(Error::InvalidInput(format!("accuracy {accuracy} must be >= 0")));
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidInput("singular values must be finite and >= 0".into()));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("singular values must be sorted descending".into()));
        }
        Ok(Self { values, accuracy })
    }

    /// Exact spectrum given in any order; it is sorted descending.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(|a, b| b.total_cmp(a));
        Self::new(values, 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `s_1`, or 0 for an empty spectrum.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `s_min`, or 0 for an empty spectrum.
    pub fn smallest(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `s_i` with 1-based index, as in `s_{n-k}`.
    pub fn s(&self, i: usize) -> Option<f64> {
        i.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `s_1 / s_n`, with an explicit marker for singular spectra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionNumber {
    Finite(f64),
    Infinite,
}

impl ConditionNumber {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ConditionNumber::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ConditionNumber::Finite(k) => Some(k),
            ConditionNumber::Infinite => None,
        }
    }
}

impl fmt::Display for ConditionNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionNumber::Finite(k) => write!(f, "{k}"),
            ConditionNumber::Infinite => f.write_str("inf"),
        }
    }
}

/// Condition number of a spectrum. `s_n` at or below the spectrum's
/// accuracy counts as zero.
pub fn condition_number(s: &SingularSpectrum) -> Result<ConditionNumber> {
    if s.is_empty() {
        return Err(Error::InvalidInput("empty spectrum".into()));
    }
    let smallest = s.smallest();
    if smallest <= s.accuracy() {
        Ok(ConditionNumber::Infinite)
    } else {
        Ok(ConditionNumber::Finite(s.largest() / smallest))
    }
}

/// Working copy with contiguous columns, transposed when wide so that the
/// column count is `min(rows, cols)`.
struct Columns {
    data: Vec<f64>,
    len: usize,
    count: usize,
}

impl Columns {
    fn of(m: &DenseMatrix) -> Self {
        let (r, c) = (m.rows(), m.cols());
        if r >= c {
            let mut data = vec![0.0; r * c];
            for i in 0..r {
                for (j, &x) in m.row(i).iter().enumerate() {
                    data[j * r + i] = x;
                }
            }
            Self { data, len: r, count: c }
        } else {
            // Rows of m become the columns.
            Self {
                data: m.as_slice().to_vec(),
                len: c,
                count: r,
            }
        }
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.len..(j + 1) * self.len]
    }

    fn pair_mut(&mut self, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
        debug_assert!(p < q);
        let len = self.len;
        let (head, tail) = self.data.split_at_mut(q * len);
        (&mut head[p * len..(p + 1) * len], &mut tail[..len])
    }
}

#[inline]
fn rotate(x: &mut [f64], y: &mut [f64], c: f64, s: f64) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (xa, yb) = (*a, *b);
        *a = c * xa - s * yb;
        *b = s * xa + c * yb;
    }
}

/// Runs cyclic sweeps until every column pair is orthogonal to `tol`
/// relative. Returns the largest relative inner product seen in the final
/// sweep. When `v` is given, rotations are accumulated into it (columns of
/// length `count`).
fn orthogonalize(w: &mut Columns, mut v: Option<&mut Columns>) -> f64 {
    let n = w.count;
    let tol = BASE_TOL.max(f64::EPSILON * (w.len as f64).sqrt());
    let mut sq: Vec<f64> = vec![0.0; n];
    let mut last_off = 0.0f64;
    for _ in 0..MAX_SWEEPS {
        for (j, s) in sq.iter_mut().enumerate() {
            let col = w.column(j);
            *s = dot(col, col);
        }
        let mut rotated = false;
        let mut off = 0.0f64;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (alpha, beta) = (sq[p], sq[q]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (cp, cq) = w.pair_mut(p, q);
                let gamma = dot(cp, cq);
                let rel = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                off = off.max(rel);
                if rel <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(cp, cq, c, s);
                sq[p] = alpha - t * gamma;
                sq[q] = beta + t * gamma;
                if let Some(v) = v.as_deref_mut() {
                    let (vp, vq) = v.pair_mut(p, q);
                    rotate(vp, vq, c, s);
                }
            }
        }
        last_off = off;
        if !rotated {
            break;
        }
    }
    last_off
}

fn spectrum_of(w: &Columns, off: f64) -> SingularSpectrum {
    let mut values: Vec<f64> = (0..w.count).map(|j| norm2(w.column(j))).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let s1 = values.first().copied().unwrap_or(0.0);
    let accuracy = s1 * (off + (w.len + w.count) as f64 * f64::EPSILON);
    SingularSpectrum { values, accuracy }
}

/// Singular values of a real matrix, descending; `min(rows, cols)` of them.
pub fn svd_values(m: &DenseMatrix) -> Result<SingularSpectrum> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut w = Columns::of(m);
    let off = orthogonalize(&mut w, None);
    Ok(spectrum_of(&w, off))
}

/// Smallest singular value `s_min(m)`.
pub fn smallest_singular_value(m: &DenseMatrix) -> Result<f64> {
    Ok(svd_values(m)?.smallest())
}

/// Largest singular value together with a unit right singular vector `u`
/// achieving `‖m u‖ = ‖m‖`.
pub fn top_right_singular_vector(m: &DenseMatrix) -> Result<(f64, Vec<f64>)> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let mut w = Columns::of(m);
    if m.rows() >= m.cols() {
        let n = w.count;
        let mut ident = vec![0.0; n * n];
        for j in 0..n {
            ident[j * n + j] = 1.0;
        }
        let mut v = Columns { data: ident, len: n, count: n };
        orthogonalize(&mut w, Some(&mut v));
        let (j, s1) = argmax_norm(&w);
        Ok((s1, v.column(j).to_vec()))
    } else {
        // Working on the transpose: its left singular vectors are the right
        // singular vectors of m, read off the rotated columns directly.
        orthogonalize(&mut w, None);
        let (j, s1) = argmax_norm(&w);
        let mut u = w.column(j).to_vec();
        if s1 > 0.0 {
            u.iter_mut().for_each(|x| *x /= s1);
        } else {
            u.iter_mut().for_each(|x| *x = 0.0);
            u[0] = 1.0;
        }
        Ok((s1, u))
    }
}

fn argmax_norm(w: &Columns) -> (usize, f64) {
    (0..w.count)
        .map(|j| (j, norm2(w.column(j))))
        .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// Singular values of a complex matrix via its real embedding. Every value
/// of the embedding appears twice; pairs are averaged back into one.
pub fn svd_values_complex(m: &ComplexDenseMatrix) -> Result<SingularSpectrum> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let doubled = svd_values(&m.real_embedding())?;
    let values = doubled
        .values()
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect();
    Ok(SingularSpectrum {
        values,
        accuracy: doubled.accuracy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values() {
        let m = DenseMatrix::from_diagonal(&[1.0, 3.0, 2.0]);
        let s = svd_values(&m).unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn identity_values() {
        let s = svd_values(&DenseMatrix::identity(4)).unwrap();
        assert_eq!(s.values(), &[1.0; 4]);
    }

    #[test]
    fn wide_and_tall_agree() {
        let m = DenseMatrix::from_fn(3, 5, |i, j| ((i + 1) * (j + 2)) as f64 + (i * j) as f64 * 0.3);
        let a = svd_values(&m).unwrap();
        let b = svd_values(&m.transpose()).unwrap();
        assert_eq!(a.len(), 3);
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-12 * a.largest());
        }
    }

    #[test]
    fn rejects_nan() {
        // from_row_major refuses NaN, so poke one in through the mutable slice.
        let mut m = DenseMatrix::zeros(2, 2);
        m.as_mut_slice()[1] = f64::NAN;
        assert!(matches!(svd_values(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn condition_examples() {
        let k = |v: Vec<f64>| condition_number(&SingularSpectrum::new(v, 0.0).unwrap()).unwrap();
        assert_eq!(k(vec![1.0, 1.0, 1.0]), ConditionNumber::Finite(1.0));
        assert_eq!(k(vec![10.0, 5.0, 1.0]), ConditionNumber::Finite(10.0));
        assert_eq!(k(vec![1.0, 0.0]), ConditionNumber::Infinite);
        assert!(condition_number(&SingularSpectrum::new(vec![], 0.0).unwrap()).is_err());
    }

    #[test]
    fn spectrum_validation() {
        assert!(SingularSpectrum::new(vec![1.0, 2.0], 0.0).is_err());
        assert!(SingularSpectrum::new(vec![1.0, -1.0], 0.0).is_err());
        assert!(SingularSpectrum::new(vec![1.0], -1.0).is_err());
        assert_eq!(SingularSpectrum::new(vec![3.0, 2.0], 0.0).unwrap().s(2), Some(2.0));
    }

    #[test]
    fn complex_modulus() {
        let mut m = ComplexDenseMatrix::zeros(1, 1);
        m.set(0, 0, (3.0, 4.0));
        let s = svd_values_complex(&m).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.values()[0] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn complex_real_only_matches_real() {
        let re = DenseMatrix::from_fn(4, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let a = svd_values(&re).unwrap();
        let b = svd_values_complex(&ComplexDenseMatrix::from_real(re)).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y).abs() <= 1e-12 * a.largest());
        }
    }

    #[test]
    fn top_vector_attains_norm() {
        let m = DenseMatrix::from_fn(4, 4, |i, j| 1.0 / (i + j + 1) as f64);
        let (s1, u) = top_right_singular_vector(&m).unwrap();
        let mu = m.matvec(&u).unwrap();
        assert!((norm2(&mu) - s1).abs() < 1e-12);
        assert!((norm2(&u) - 1.0).abs() < 1e-12);

        let wide = DenseMatrix::from_fn(2, 5, |i, j| (i as f64 + 1.0) * (j as f64 - 2.0) + 0.1 * j as f64);
        let (s1, u) = top_right_singular_vector(&wide).unwrap();
        assert_eq!(u.len(), 5);
        assert!((norm2(&wide.matvec(&u).unwrap()) - s1).abs() < 1e-12 * s1);
    }
}
