//! Deterministic, splittable sampling.
//!
//! Every draw is a pure function of a [`Seed`] `(master, stream)`. The
//! underlying generator is ChaCha8 keyed by `master` with `stream` selecting
//! an independent counter stream, so Monte Carlo trials can run in any order
//! or on any thread and still reproduce bit for bit.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{norm2, ComplexDenseMatrix, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub const fn new(master: u64, stream: u64) -> Self {
        Self { master, stream }
    }

    /// Seed for trial `index` under the same master.
    pub const fn trial(self, index: u64) -> Self {
        Self {
            master: self.master,
            stream: index,
        }
    }

    pub fn rng(self) -> SeedRng {
        let mut inner = ChaCha8Rng::seed_from_u64(self.master);
        inner.set_stream(self.stream);
        SeedRng { inner, spare: None }
    }
}

/// Entry distributions for perturbation factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistributionSpec {
    /// i.i.d. N(0, 1).
    RealGaussianUnit,
    /// Real and imaginary parts i.i.d. N(0, 1/2).
    ComplexGaussianHalf,
    /// Uniform on {-1, +1}.
    Rademacher,
    /// Columns independently uniform on the unit sphere.
    SphereUniform,
}

impl DistributionSpec {
    pub const ALL: [DistributionSpec; 4] = [
        DistributionSpec::RealGaussianUnit,
        DistributionSpec::ComplexGaussianHalf,
        DistributionSpec::Rademacher,
        DistributionSpec::SphereUniform,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionSpec::RealGaussianUnit => "gaussian",
            DistributionSpec::ComplexGaussianHalf => "complex",
            DistributionSpec::Rademacher => "rademacher",
            DistributionSpec::SphereUniform => "sphere",
        }
    }

    pub fn is_complex(self) -> bool {
        self == DistributionSpec::ComplexGaussianHalf
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistributionSpec::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown distribution {s:?} (expected gaussian, complex, rademacher or sphere)"
                ))
            })
    }
}

/// A sampled matrix, real or complex depending on the distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Sample {
    Real(DenseMatrix),
    Complex(ComplexDenseMatrix),
}

impl Sample {
    pub fn into_real(self) -> Option<DenseMatrix> {
        match self {
            Sample::Real(m) => Some(m),
            Sample::Complex(_) => None,
        }
    }

    pub fn into_complex(self) -> ComplexDenseMatrix {
        match self {
            Sample::Real(m) => ComplexDenseMatrix::from_real(m),
            Sample::Complex(m) => m,
        }
    }
}

pub struct SeedRng {
    inner: ChaCha8Rng,
    spare: Option<f64>,
}

impl SeedRng {
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by Box–Muller; the second variate of each pair is
    /// kept for the next call.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - U lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn rademacher(&mut self) -> f64 {
        if self.inner.next_u32() & 1 == 0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn fill_gaussian(&mut self, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = self.gaussian());
    }

    pub fn gaussian_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    pub fn rademacher_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.rademacher()).collect()
    }

    /// Uniform point on the unit sphere in `R^n`.
    pub fn sphere_vec(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut g = self.gaussian_vec(n);
            let norm = norm2(&g);
            if norm > 0.0 {
                g.iter_mut().for_each(|x| *x /= norm);
                return g;
            }
        }
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| self.gaussian())
    }

    pub fn rademacher_matrix(&mut self, rows: usize, cols: usize) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, |_, _| self.rademacher())
    }

    /// Matrix whose columns are independent uniform points on `S^{rows-1}`.
    pub fn sphere_matrix(&mut self, rows: usize, cols: usize) -> DenseMatrix {
        let columns: Vec<Vec<f64>> = (0..cols).map(|_| self.sphere_vec(rows)).collect();
        DenseMatrix::from_fn(rows, cols, |i, j| columns[j][i])
    }

    pub fn complex_gaussian_matrix(&mut self, rows: usize, cols: usize) -> ComplexDenseMatrix {
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut m = ComplexDenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let re = scale * self.gaussian();
                let im = scale * self.gaussian();
                m.set(i, j, (re, im));
            }
        }
        m
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, spec: DistributionSpec) -> Sample {
        match spec {
            DistributionSpec::RealGaussianUnit => Sample::Real(self.gaussian_matrix(rows, cols)),
            DistributionSpec::ComplexGaussianHalf => {
                Sample::Complex(self.complex_gaussian_matrix(rows, cols))
            }
            DistributionSpec::Rademacher => Sample::Real(self.rademacher_matrix(rows, cols)),
            DistributionSpec::SphereUniform => Sample::Real(self.sphere_matrix(rows, cols)),
        }
    }

    /// Haar-distributed orthogonal matrix: Householder QR of a Gaussian
    /// matrix with the signs of `diag(R)` folded into `Q`.
    pub fn orthogonal(&mut self, n: usize) -> DenseMatrix {
        let mut a = self.gaussian_matrix(n, n);
        let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut r_signs = vec![1.0; n];
        for k in 0..n {
            let mut v: Vec<f64> = (k..n).map(|i| a[(i, k)]).collect();
            let norm = norm2(&v);
            if norm == 0.0 {
                reflectors.push(Vec::new());
                continue;
            }
            let alpha = if v[0] >= 0.0 { -norm } else { norm };
            r_signs[k] = alpha.signum();
            v[0] -= alpha;
            let vnorm = norm2(&v);
            v.iter_mut().for_each(|x| *x /= vnorm);
            for j in k..n {
                let s: f64 = (k..n).map(|i| v[i - k] * a[(i, j)]).sum();
                for i in k..n {
                    a[(i, j)] -= 2.0 * s * v[i - k];
                }
            }
            reflectors.push(v);
        }
        let mut q = DenseMatrix::identity(n);
        for k in (0..n).rev() {
            let v = &reflectors[k];
            if v.is_empty() {
                continue;
            }
            for j in 0..n {
                let s: f64 = (k..n).map(|i| v[i - k] * q[(i, j)]).sum();
                for i in k..n {
                    q[(i, j)] -= 2.0 * s * v[i - k];
                }
            }
        }
        for j in 0..n {
            if r_signs[j] < 0.0 {
                for i in 0..n {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        q
    }
}

/// Fresh matrix with i.i.d. entries per `spec` drawn from stream `seed`.
pub fn sample_matrix(seed: Seed, rows: usize, cols: usize, spec: DistributionSpec) -> Result<Sample> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidInput("rows and cols must be >= 1".into()));
    }
    Ok(seed.rng().matrix(rows, cols, spec))
}

/// Haar-random orthogonal `n x n` matrix from stream `seed`.
pub fn sample_orthogonal(seed: Seed, n: usize) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    Ok(seed.rng().orthogonal(n))
}
