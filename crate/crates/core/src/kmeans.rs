//! Probability that noisy points land in a small ball around the origin.
//!
//! Dense noise puts `x ~ N(0, σ² I_d)` in the ball with probability at most
//! `(ε/σ)^d`. Rank-1 noise `y x` (scalar times vector) only achieves order
//! `ε / sqrt(d)`. Both are estimated by Monte Carlo, and the rank-1 law is
//! also integrated numerically.

use std::fmt;
use std::str::FromStr;

use statrs::function::erf::erf;
use statrs::function::gamma::ln_gamma;

use crate::bounds::{run_trials, McEstimate};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::rng::Seed;

pub const MIN_BALL_TRIALS: u64 = 1000;
pub const QUADRATURE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallProbQuery {
    pub d: usize,
    pub eps: f64,
    pub sigma: f64,
}

impl BallProbQuery {
    pub fn new(d: usize, eps: f64, sigma: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        if !(eps >= 0.0) || eps.is_nan() {
            return Err(Error::InvalidInput(format!("eps must be >= 0, got {eps}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidInput(format!("sigma must be finite and > 0, got {sigma}")));
        }
        Ok(Self { d, eps, sigma })
    }

    /// `(ε/σ)^d`, the dense-noise upper bound.
    pub fn dense_bound(&self) -> f64 {
        (self.eps / self.sigma).powi(self.d as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMode {
    /// `x ~ N(0, σ² I_d)`, event `‖x‖ ≤ ε`.
    DenseGaussian,
    /// `y ~ N(0, σ²)`, `x ~ N(0, I_d)`, event `|y| ‖x‖ ≤ ε`.
    Rank1Product,
}

impl BallMode {
    pub const ALL: [BallMode; 2] = [BallMode::DenseGaussian, BallMode::Rank1Product];

    pub fn name(self) -> &'static str {
        match self {
            BallMode::DenseGaussian => "dense_gaussian",
            BallMode::Rank1Product => "rank1_product",
        }
    }
}

impl fmt::Display for BallMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BallMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown ball mode {s:?} (dense_gaussian, rank1_product)")))
    }
}

pub fn ball_prob_mc(q: &BallProbQuery, mode: BallMode, trials: u64, seed: Seed) -> Result<McEstimate> {
    if trials < MIN_BALL_TRIALS {
        return Err(Error::Precondition(format!(
            "need at least {MIN_BALL_TRIALS} trials, got {trials}"
        )));
    }
    let d = q.d;
    let hits = run_trials(trials, seed, |s| {
        let mut rng = s.rng();
        let x = rng.gaussian_vec(d);
        let r = match mode {
            BallMode::DenseGaussian => q.sigma * norm2(&x),
            BallMode::Rank1Product => (q.sigma * rng.gaussian()).abs() * norm2(&x),
        };
        Ok(r <= q.eps)
    })?;
    McEstimate::from_counts(hits.iter().filter(|&&h| h).count() as u64, trials, seed)
}

/// `P(|y| ‖x‖ ≤ ε)` for `y ~ N(0, σ²)`, `x ~ N(0, I_d)`.
///
/// Conditioning on `u = ‖x‖` leaves `P(|y| ≤ ε/u) = erf(ε / (σ u √2))`,
/// integrated against the chi density of `u`. The result is divided by the
/// numerically integrated total mass of that density.
pub fn product_cdf_quadrature(q: &BallProbQuery) -> Result<f64> {
    if q.eps == 0.0 {
        return Ok(0.0);
    }
    let d = q.d as f64;
    let log_norm = (0.5 * d - 1.0) * std::f64::consts::LN_2 + ln_gamma(0.5 * d);
    let chi = move |u: f64| {
        if u <= 0.0 {
            return if q.d == 1 { (-log_norm).exp() } else { 0.0 };
        }
        ((d - 1.0) * u.ln() - 0.5 * u * u - log_norm).exp()
    };
    let scaled = q.eps / (q.sigma * std::f64::consts::SQRT_2);
    let upper = d.sqrt() + 12.0;
    let panels = 64;
    let mass = integrate(&chi, 0.0, upper, panels, QUADRATURE_TOL)?;
    let hit = integrate(
        &|u: f64| {
            let e = if u <= 0.0 { 1.0 } else { erf(scaled / u) };
            chi(u) * e
        },
        0.0,
        upper,
        panels,
        QUADRATURE_TOL,
    )?;
    Ok((hit / mass).clamp(0.0, 1.0))
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and `|K15 - G7|`.
fn gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let pair = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    (k * h, ((k - g) * h).abs())
}

const MAX_DEPTH: u32 = 40;

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let (val, err) = gauss_kronrod(f, a, b);
    if err <= tol || depth == MAX_DEPTH {
        return (val, err);
    }
    let m = 0.5 * (a + b);
    let (l, le) = adapt(f, a, m, 0.5 * tol, depth + 1);
    let (r, re) = adapt(f, m, b, 0.5 * tol, depth + 1);
    (l + r, le + re)
}

/// Adaptive Gauss–Kronrod over `[a, b]` split into `panels` equal pieces.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, tol: f64) -> Result<f64> {
    let panels = panels.max(1);
    let w = (b - a) / panels as f64;
    let (mut total, mut err) = (0.0, 0.0);
    for p in 0..panels {
        let lo = a + w * p as f64;
        let hi = if p + 1 == panels { b } else { lo + w };
        let (v, e) = adapt(f, lo, hi, tol / panels as f64, 0);
        total += v;
        err += e;
    }
    if !(err <= tol) || !total.is_finite() {
        return Err(Error::Quadrature { achieved: err });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma_lr;

    #[test]
    fn integrate_polynomial_and_gaussian() {
        let v = integrate(&|x: f64| x * x * x, 0.0, 2.0, 1, 1e-12).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let v = integrate(&|x: f64| (-0.5 * x * x).exp(), -20.0, 20.0, 8, 1e-10).unwrap();
        assert!((v - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn eps_extremes() {
        let q = BallProbQuery::new(10, 0.0, 1.0).unwrap();
        assert_eq!(product_cdf_quadrature(&q).unwrap(), 0.0);
        let q = BallProbQuery::new(10, 1e12, 1.0).unwrap();
        assert!((product_cdf_quadrature(&q).unwrap() - 1.0).abs() < 1e-6);
        for mode in BallMode::ALL {
            let q = BallProbQuery::new(3, 0.0, 1.0).unwrap();
            assert_eq!(ball_prob_mc(&q, mode, 1000, Seed::new(1, 0)).unwrap().p_hat, 0.0);
        }
    }

    #[test]
    fn d1_closed_form() {
        // Midpoint sum over the half-normal density of |x|.
        let eps = 0.3f64;
        let q = BallProbQuery::new(1, eps, 1.0).unwrap();
        let quad = product_cdf_quadrature(&q).unwrap();
        let n = 4000;
        let h = 10.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            let px = 2.0 * (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
            acc += px * erf(eps / (x * std::f64::consts::SQRT_2)) * h;
        }
        assert!((quad - acc).abs() < 1e-4, "{quad} vs {acc}");
    }

    #[test]
    fn dense_mc_matches_chi_square() {
        let q = BallProbQuery::new(2, 0.5, 1.0).unwrap();
        let est = ball_prob_mc(&q, BallMode::DenseGaussian, 100_000, Seed::new(4, 0)).unwrap();
        let exact = 1.0 - (-0.125f64).exp();
        assert!(est.contains(exact), "{est:?} vs {exact}");
        assert!(exact <= q.dense_bound());
        let q = BallProbQuery::new(3, 1.2, 1.5).unwrap();
        let est = ball_prob_mc(&q, BallMode::DenseGaussian, 100_000, Seed::new(5, 0)).unwrap();
        let exact = gamma_lr(1.5, 0.5 * (1.2f64 / 1.5).powi(2));
        assert!(est.contains(exact), "{est:?} vs {exact}");
    }

    #[test]
    fn rank1_mc_matches_quadrature() {
        let q = BallProbQuery::new(6, 0.4, 1.0).unwrap();
        let est = ball_prob_mc(&q, BallMode::Rank1Product, 100_000, Seed::new(6, 0)).unwrap();
        let quad = product_cdf_quadrature(&q).unwrap();
        assert!(est.contains(quad), "{est:?} vs {quad}");
    }

    #[test]
    fn sigma_rescales_eps() {
        let a = product_cdf_quadrature(&BallProbQuery::new(5, 0.2, 2.0).unwrap()).unwrap();
        let b = product_cdf_quadrature(&BallProbQuery::new(5, 0.1, 1.0).unwrap()).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn rejects_bad_queries() {
        assert!(BallProbQuery::new(0, 0.1, 1.0).is_err());
        assert!(BallProbQuery::new(1, -0.1, 1.0).is_err());
        assert!(BallProbQuery::new(1, 0.1, 0.0).is_err());
        let q = BallProbQuery::new(1, 0.1, 1.0).unwrap();
        assert!(ball_prob_mc(&q, BallMode::DenseGaussian, 999, Seed::new(0, 0)).is_err());
    }
}
