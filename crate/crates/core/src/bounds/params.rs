use crate::error::{Error, Result};

/// Absolute constants left unspecified by the theory. All default to 1; the
/// experiments target scaling exponents, not constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    /// Overall multiplier `C` of the beyond-rank-k bound.
    pub big_c: f64,
    /// Exponent constant `c` of the beyond-rank-k bound.
    pub small_c: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            c5: 1.0,
            big_c: 1.0,
            small_c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundParams {
    pub t1: f64,
    pub t2: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub eps: f64,
    pub t: f64,
    pub constants: Constants,
}

fn check_rank(n: usize, k: usize) -> Result<()> {
    if k == 0 || 2 * k > n {
        return Err(Error::Precondition(format!("need 1 <= k <= n/2, got n={n}, k={k}")));
    }
    Ok(())
}

/// Event threshold `eps s_{n-k} / (n k)` of the simplified rank-k statement.
pub fn main_threshold(eps: f64, n: usize, k: usize, s_nk: f64) -> Result<f64> {
    check_rank(n, k)?;
    if !(eps >= 0.0) {
        return Err(Error::Precondition(format!("eps must be >= 0, got {eps}")));
    }
    if !(s_nk > 0.0) {
        return Err(Error::Precondition(format!("s_(n-k) must be > 0, got {s_nk}")));
    }
    if s_nk >= n as f64 {
        return Err(Error::Precondition(format!(
            "s_(n-k) = {s_nk} must be < n = {n}"
        )));
    }
    Ok(eps * s_nk / (n as f64 * k as f64))
}

/// Threshold and probability bound of the full rank-k statement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainBound {
    pub threshold: f64,
    pub bound: f64,
}

fn main_threshold_full(p: &BoundParams, n: usize, k: usize, s_nk: f64) -> f64 {
    let t2sq = p.t2 * p.t2;
    let inner = 0.5f64.min(s_nk / (4.0 * t2sq * (n - k) as f64));
    p.t1 * p.t1 / k as f64 * inner
}

/// `P(s_n ≤ t1²/k · min(1/2, s_{n-k}/(4 t2² (n-k)))) ≤ C1 t1 + C2 exp(-C3 t2² n)`
/// for real Gaussian factors.
pub fn main_rhs(p: &BoundParams, n: usize, k: usize, s_nk: f64) -> Result<MainBound> {
    check_rank(n, k)?;
    let c = &p.constants;
    Ok(MainBound {
        threshold: main_threshold_full(p, n, k, s_nk),
        bound: c.c1 * p.t1 + c.c2 * (-c.c3 * p.t2 * p.t2 * n as f64).exp(),
    })
}

/// Complex Gaussian counterpart: the first term becomes `2 t1²`.
pub fn main_rhs_complex(p: &BoundParams, n: usize, k: usize, s_nk: f64) -> Result<MainBound> {
    check_rank(n, k)?;
    let c = &p.constants;
    Ok(MainBound {
        threshold: main_threshold_full(p, n, k, s_nk),
        bound: 2.0 * p.t1 * p.t1 + c.c2 * (-c.c3 * p.t2 * p.t2 * n as f64).exp(),
    })
}

/// The four terms of the full-rank bound on `P(s_n(M + U Vᵀ) ≤ 1/t)`, each
/// already multiplied by `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeyondBound {
    pub terms: [f64; 4],
}

impl BeyondBound {
    pub fn total(&self) -> f64 {
        self.terms.iter().sum()
    }
}

fn beyond_terms(p: &BoundParams, n: usize, k: usize, s_n: f64) -> BeyondBound {
    let c = &p.constants;
    let nk = (n * k) as f64;
    let first = (n as f64).sqrt() / (p.x2 * p.t) * (1.0 + p.x1 * p.x3.sqrt() * nk.sqrt() / s_n);
    let second = (-p.x1 * p.x1 / 4.0).exp();
    let third = (2.0 / std::f64::consts::PI).powf(k as f64 / 2.0) * p.x2.powi(k as i32);
    let fourth = (-c.small_c * p.x3).exp();
    BeyondBound {
        terms: [first, second, third, fourth].map(|x| c.big_c * x),
    }
}

/// Full-rank bound with its hypotheses checked: `t > 0`, `0 < x2 ≤ 1`,
/// `x1 ≥ 3 sqrt(2 ln(2nk))`, `x3 ≥ nk`.
pub fn beyond_rhs(p: &BoundParams, n: usize, k: usize, s_n: f64) -> Result<BeyondBound> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("n and k must be >= 1".into()));
    }
    if !(p.t > 0.0) {
        return Err(Error::Precondition(format!("t must be > 0, got {}", p.t)));
    }
    if !(p.x2 > 0.0 && p.x2 <= 1.0) {
        return Err(Error::Precondition(format!("x2 must lie in (0, 1], got {}", p.x2)));
    }
    let nk = (n * k) as f64;
    let x1_floor = 3.0 * (2.0 * (2.0 * nk).ln()).sqrt();
    if !(p.x1 >= x1_floor) {
        return Err(Error::Precondition(format!(
            "x1 = {} below its floor 3 sqrt(2 ln 2nk) = {x1_floor}",
            p.x1
        )));
    }
    if !(p.x3 >= nk) {
        return Err(Error::Precondition(format!("x3 = {} below its floor nk = {nk}", p.x3)));
    }
    if !(s_n > 0.0) {
        return Err(Error::Precondition(format!("s_n must be > 0, got {s_n}")));
    }
    Ok(beyond_terms(p, n, k, s_n))
}

/// Parameter choice `t = sqrt(n)/eps, x1 = 3 sqrt(ln 2nk), x2 = sqrt(eps),
/// x3 = nk` that turns the full-rank bound into a statement about
/// `P(s_n ≤ eps / sqrt(n))`.
pub fn corollary_params(eps: f64, n: usize, k: usize, constants: Constants) -> BoundParams {
    let nk = (n * k) as f64;
    BoundParams {
        t: (n as f64).sqrt() / eps,
        x1: 3.0 * (2.0 * nk).ln().sqrt(),
        x2: eps.sqrt(),
        x3: nk,
        eps,
        constants,
        ..BoundParams::default()
    }
}

/// Full-rank bound evaluated at [`corollary_params`]. That `x1` sits below
/// the floor [`beyond_rhs`] enforces, so the expression is evaluated
/// directly.
pub fn corollary_rhs(eps: f64, n: usize, k: usize, s_n: f64, constants: Constants) -> Result<BeyondBound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Precondition(format!("eps must lie in (0, 1), got {eps}")));
    }
    if n == 0 || k == 0 || !(s_n > 0.0) {
        return Err(Error::Precondition("need n, k >= 1 and s_n > 0".into()));
    }
    Ok(beyond_terms(&corollary_params(eps, n, k, constants), n, k, s_n))
}
