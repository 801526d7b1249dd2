use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{svd_values, svd_values_complex, ComplexDenseMatrix, DenseMatrix, SingularSpectrum};
use crate::operator::{diagonal_model, LowRankUpdate, PerturbedOperator, DEFAULT_DENSIFY_CAP};
use crate::rng::{DistributionSpec, Seed, SeedRng};
use crate::stats::{clopper_pearson, CONFIDENCE};

/// Smallest trial count accepted by the estimators.
pub const MIN_TRIALS: u64 = 100;

/// Empirical probability with a 99% Clopper–Pearson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub trials: u64,
    pub seed: Seed,
}

impl McEstimate {
    pub fn from_counts(successes: u64, trials: u64, seed: Seed) -> Result<Self> {
        let (ci_low, ci_high) = clopper_pearson(successes, trials, CONFIDENCE)?;
        Ok(Self {
            p_hat: successes as f64 / trials as f64,
            ci_low,
            ci_high,
            successes,
            trials,
            seed,
        })
    }

    /// Fraction of `samples` at or below `threshold`.
    pub fn below(samples: &[f64], threshold: f64, seed: Seed) -> Result<Self> {
        let hits = samples.iter().filter(|&&s| s <= threshold).count() as u64;
        Self::from_counts(hits, samples.len() as u64, seed)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials < MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_TRIALS} trials, got {trials}"
        )));
    }
    Ok(())
}

/// Runs `trial(seed.trial(i))` for `i in 0..trials` in parallel. Output order
/// follows the trial index, so results do not depend on scheduling.
pub fn run_trials<T, F>(trials: u64, seed: Seed, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Seed) -> Result<T> + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| trial(seed.trial(i)))
        .collect()
}

/// Setup for studying `s_n(D + U Vᵀ)` with `D` the diagonal model of a
/// given spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SnStudy {
    pub n: usize,
    pub k: usize,
    pub spectrum: SingularSpectrum,
    pub dist: DistributionSpec,
    /// Use `V = U`.
    pub symmetric: bool,
}

impl SnStudy {
    pub fn new(spectrum: SingularSpectrum, k: usize, dist: DistributionSpec, symmetric: bool) -> Result<Self> {
        let n = spectrum.len();
        if k == 0 || k > n {
            return Err(Error::Precondition(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        if n > DEFAULT_DENSIFY_CAP {
            return Err(Error::DensifyCap { n, cap: DEFAULT_DENSIFY_CAP });
        }
        Ok(Self { n, k, spectrum, dist, symmetric })
    }

    /// Spectrum `(1, ..., 1, 0, ..., 0)` with `k` zeros: rank `n - k`.
    pub fn rank_deficient(n: usize, k: usize, dist: DistributionSpec, symmetric: bool) -> Result<Self> {
        if k > n {
            return Err(Error::Precondition(format!("k = {k} exceeds n = {n}")));
        }
        let values = (0..n).map(|i| if i < n - k { 1.0 } else { 0.0 }).collect();
        Self::new(SingularSpectrum::new(values, 0.0)?, k, dist, symmetric)
    }

    /// Perturbed matrix of one trial.
    pub fn sample_real(&self, rng: &mut SeedRng) -> Result<DenseMatrix> {
        let u = real_factor(rng, self.n, self.k, self.dist)?;
        let update = if self.symmetric {
            LowRankUpdate::symmetric(u)?
        } else {
            let v = real_factor(rng, self.n, self.k, self.dist)?;
            LowRankUpdate::new(u, v)?
        };
        PerturbedOperator::new(diagonal_model(&self.spectrum), Some(update))?.to_dense()
    }

    /// Complex perturbed matrix `D + U Vᵀ` (plain transpose) of one trial.
    pub fn sample_complex(&self, rng: &mut SeedRng) -> Result<ComplexDenseMatrix> {
        let u = rng.complex_gaussian_matrix(self.n, self.k);
        let v = if self.symmetric {
            u.clone()
        } else {
            rng.complex_gaussian_matrix(self.n, self.k)
        };
        let d = ComplexDenseMatrix::from_real(DenseMatrix::from_diagonal(self.spectrum.values()));
        d.add(&u.matmul(&v.transpose())?)
    }

    pub fn trial_smallest(&self, seed: Seed) -> Result<f64> {
        let mut rng = seed.rng();
        if self.dist.is_complex() {
            Ok(svd_values_complex(&self.sample_complex(&mut rng)?)?.smallest())
        } else {
            Ok(svd_values(&self.sample_real(&mut rng)?)?.smallest())
        }
    }

    /// `s_n` of trials `0..trials` under `seed.master`.
    pub fn sample_smallest(&self, trials: u64, seed: Seed) -> Result<Vec<f64>> {
        run_trials(trials, seed, |s| self.trial_smallest(s))
    }
}

fn real_factor(rng: &mut SeedRng, n: usize, k: usize, dist: DistributionSpec) -> Result<DenseMatrix> {
    rng.matrix(n, k, dist)
        .into_real()
        .ok_or_else(|| Error::InvalidInput(format!("{dist} factors are not real")))
}

/// Estimates `P(s_n(D + U Vᵀ) ≤ threshold)`.
pub fn mc_small_sn(study: &SnStudy, threshold: f64, trials: u64, seed: Seed) -> Result<McEstimate> {
    check_trials(trials)?;
    let samples = study.sample_smallest(trials, seed)?;
    McEstimate::below(&samples, threshold, seed)
}

/// Gaussian block events behind the rank-k argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailEvent {
    /// `s_k(G) ≤ t / sqrt(k)` for real `k x k` G.
    GaussSmallSk,
    /// `s_1(G) ≥ t sqrt(n-k)` for real `(n-k) x k` G.
    GaussLargeS1,
    ComplexSmallSk,
    ComplexLargeS1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailDims {
    pub n_minus_k: usize,
    pub k: usize,
}

pub fn tail_lemma_mc(which: TailEvent, dims: TailDims, t: f64, trials: u64, seed: Seed) -> Result<McEstimate> {
    check_trials(trials)?;
    let TailDims { n_minus_k, k } = dims;
    let (rows, complex, small) = match which {
        TailEvent::GaussSmallSk => (k, false, true),
        TailEvent::GaussLargeS1 => (n_minus_k, false, false),
        TailEvent::ComplexSmallSk => (k, true, true),
        TailEvent::ComplexLargeS1 => (n_minus_k, true, false),
    };
    if rows == 0 || k == 0 {
        return Err(Error::Precondition("block dimensions must be >= 1".into()));
    }
    let hits = run_trials(trials, seed, |s| {
        let mut rng = s.rng();
        let spec = if complex {
            svd_values_complex(&rng.complex_gaussian_matrix(rows, k))?
        } else {
            svd_values(&rng.gaussian_matrix(rows, k))?
        };
        Ok(if small {
            spec.smallest() <= t / (k as f64).sqrt()
        } else {
            spec.largest() >= t * (n_minus_k as f64).sqrt()
        })
    })?;
    McEstimate::from_counts(hits.iter().filter(|&&h| h).count() as u64, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::erf::erf;

    #[test]
    fn threshold_zero_and_huge() {
        let study = SnStudy::rank_deficient(8, 1, DistributionSpec::RealGaussianUnit, false).unwrap();
        let seed = Seed::new(11, 0);
        assert_eq!(mc_small_sn(&study, 0.0, 200, seed).unwrap().p_hat, 0.0);
        // Weyl: s_n(D + UVᵀ) ≤ s_1(D) + ‖UVᵀ‖; 10x a generous norm estimate.
        let huge = 10.0 * (1.0 + 8.0 * 8.0);
        assert_eq!(mc_small_sn(&study, huge, 200, seed).unwrap().p_hat, 1.0);
    }

    #[test]
    fn too_few_trials() {
        let study = SnStudy::rank_deficient(4, 1, DistributionSpec::RealGaussianUnit, false).unwrap();
        assert!(mc_small_sn(&study, 0.1, 99, Seed::new(0, 0)).is_err());
    }

    #[test]
    fn monotone_in_threshold() {
        let study = SnStudy::rank_deficient(10, 2, DistributionSpec::RealGaussianUnit, false).unwrap();
        let seed = Seed::new(5, 0);
        let mut last = 0.0;
        for th in [1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
            let p = mc_small_sn(&study, th, 300, seed).unwrap().p_hat;
            assert!(p >= last);
            last = p;
        }
    }

    #[test]
    fn gauss_small_sk_k1() {
        let est = tail_lemma_mc(TailEvent::GaussSmallSk, TailDims { n_minus_k: 1, k: 1 }, 0.1, 20_000, Seed::new(1, 0)).unwrap();
        let exact = erf(0.1 / std::f64::consts::SQRT_2);
        assert!(est.contains(exact), "{est:?} vs {exact}");
    }

    #[test]
    fn complex_small_sk_k1() {
        let est = tail_lemma_mc(TailEvent::ComplexSmallSk, TailDims { n_minus_k: 1, k: 1 }, 0.1, 20_000, Seed::new(2, 0)).unwrap();
        let exact = 1.0 - (-0.01f64).exp();
        assert!(est.contains(exact), "{est:?} vs {exact}");
    }

    #[test]
    fn gauss_large_s1_rare() {
        let est = tail_lemma_mc(TailEvent::GaussLargeS1, TailDims { n_minus_k: 100, k: 4 }, 4.0, 500, Seed::new(3, 0)).unwrap();
        assert!(est.p_hat < 0.01);
        let est = tail_lemma_mc(TailEvent::ComplexLargeS1, TailDims { n_minus_k: 100, k: 4 }, 4.0, 500, Seed::new(3, 0)).unwrap();
        assert!(est.p_hat < 0.01);
    }
}
