//! Dense tableau simplex with Dantzig's entering rule, and Klee–Minty cubes
//! with dense or rank-1 Gaussian noise on the constraint matrix.

use std::fmt;
use std::str::FromStr;

use crate::bounds::run_trials;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::rng::Seed;

/// Reduced costs above `-OPT_TOL` count as nonnegative.
const OPT_TOL: f64 = 1e-9;
/// Column entries at or below this are not eligible pivots.
const PIVOT_TOL: f64 = 1e-12;

/// `max cᵀx` subject to `A x ≤ b`, `x ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    c: Vec<f64>,
    a: DenseMatrix,
    b: Vec<f64>,
}

impl LinearProgram {
    pub fn new(c: Vec<f64>, a: DenseMatrix, b: Vec<f64>) -> Result<Self> {
        if c.len() != a.cols() {
            return Err(Error::DimensionMismatch { expected: a.cols(), got: c.len() });
        }
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch { expected: a.rows(), got: b.len() });
        }
        if !b.iter().chain(&c).all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("objective and rhs must be finite".into()));
        }
        Ok(Self { c, a, b })
    }

    pub fn objective(&self) -> &[f64] {
        &self.c
    }

    pub fn constraints(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Same program with the constraint matrix replaced.
    pub fn with_constraints(&self, a: DenseMatrix) -> Result<Self> {
        Self::new(self.c.clone(), a, self.b.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexStatus {
    Optimal,
    Unbounded,
    CycleLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub status: SimplexStatus,
    pub pivots: usize,
    pub objective_value: f64,
    /// Primal point of the final basis (structural variables only).
    pub x: Vec<f64>,
    /// Reduced costs `c_B B⁻¹ A_j - c_j` of the final tableau, structural
    /// then slack columns.
    pub reduced_costs: Vec<f64>,
}

/// Base-5 Klee–Minty cube of dimension `n`:
/// `max Σ_j 2^{n-j} x_j` s.t. `2 Σ_{j<i} 2^{i-j} x_j + x_i ≤ 5^i`.
pub fn klee_minty_lp(n: usize) -> Result<LinearProgram> {
    if !(1..=20).contains(&n) {
        return Err(Error::Precondition(format!("Klee-Minty dimension must be in 1..=20, got {n}")));
    }
    let c = (1..=n).map(|j| 2f64.powi((n - j) as i32)).collect();
    let a = DenseMatrix::from_fn(n, n, |i, j| match j.cmp(&i) {
        std::cmp::Ordering::Less => 2.0 * 2f64.powi((i - j) as i32),
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Greater => 0.0,
    });
    let b = (1..=n).map(|i| 5f64.powi(i as i32)).collect();
    LinearProgram::new(c, a, b)
}

pub fn dantzig_solve(lp: &LinearProgram, max_pivots: usize) -> Result<SimplexResult> {
    let m = lp.a.rows();
    let n = lp.a.cols();
    if let Some(row) = lp.b.iter().position(|&v| v < 0.0) {
        return Err(Error::InfeasibleStart { row, value: lp.b[row] });
    }
    let width = n + m + 1;
    // Rows 0..m are constraints, row m holds reduced costs; last column is the rhs.
    let mut t = vec![0.0; (m + 1) * width];
    for i in 0..m {
        let row = &mut t[i * width..(i + 1) * width];
        row[..n].copy_from_slice(lp.a.row(i));
        row[n + i] = 1.0;
        row[n + m] = lp.b[i];
    }
    for j in 0..n {
        t[m * width + j] = -lp.c[j];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let mut pivots = 0;
    let status = loop {
        let obj = &t[m * width..m * width + n + m];
        let (enter, min_rc) = obj
            .iter()
            .enumerate()
            .fold((usize::MAX, -OPT_TOL), |acc, (j, &r)| if r < acc.1 { (j, r) } else { acc });
        if min_rc >= -OPT_TOL || enter == usize::MAX {
            break SimplexStatus::Optimal;
        }
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aij = t[i * width + enter];
            if aij <= PIVOT_TOL {
                continue;
            }
            let ratio = t[i * width + n + m] / aij;
            leave = match leave {
                None => Some((i, ratio)),
                Some((r, best)) => {
                    let tie = (ratio - best).abs() <= 1e-12 * best.abs().max(1.0);
                    if ratio < best && !tie || tie && basis[i] < basis[r] {
                        Some((i, ratio))
                    } else {
                        Some((r, best))
                    }
                }
            };
        }
        let Some((leave, _)) = leave else {
            break SimplexStatus::Unbounded;
        };
        if pivots == max_pivots {
            break SimplexStatus::CycleLimit;
        }
        pivot(&mut t, width, m, leave, enter);
        basis[leave] = enter;
        pivots += 1;
    };

    let mut x = vec![0.0; n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[i * width + n + m];
        }
    }
    Ok(SimplexResult {
        status,
        pivots,
        objective_value: t[m * width + n + m],
        x,
        reduced_costs: t[m * width..m * width + n + m].to_vec(),
    })
}

fn pivot(t: &mut [f64], width: usize, m: usize, r: usize, c: usize) {
    let inv = 1.0 / t[r * width + c];
    for v in &mut t[r * width..(r + 1) * width] {
        *v *= inv;
    }
    t[r * width + c] = 1.0;
    let pivot_row = t[r * width..(r + 1) * width].to_vec();
    for i in 0..=m {
        if i == r {
            continue;
        }
        let f = t[i * width + c];
        if f == 0.0 {
            continue;
        }
        for (v, p) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
            *v -= f * p;
        }
        t[i * width + c] = 0.0;
    }
}

/// Noise added to the constraint matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbMode {
    None,
    Dense,
    Rank1,
}

impl PerturbMode {
    pub const ALL: [PerturbMode; 3] = [PerturbMode::None, PerturbMode::Dense, PerturbMode::Rank1];

    pub fn name(self) -> &'static str {
        match self {
            PerturbMode::None => "none",
            PerturbMode::Dense => "dense",
            PerturbMode::Rank1 => "rank1",
        }
    }
}

impl fmt::Display for PerturbMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown perturbation mode {s:?} (none, dense, rank1)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PivotStats {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub per_trial: Vec<usize>,
}

/// Pivot cap per trial: far above `2^n - 1` so the unperturbed path is never cut.
pub fn default_max_pivots(n: usize) -> usize {
    (1usize << n.min(24)) * 8
}

/// One perturbed Klee–Minty instance for trial `seed`.
pub fn perturbed_klee_minty(n: usize, mode: PerturbMode, sigma: f64, seed: Seed) -> Result<LinearProgram> {
    let lp = klee_minty_lp(n)?;
    let mut rng = seed.rng();
    let mut a = lp.a.clone();
    match mode {
        PerturbMode::None => return Ok(lp),
        PerturbMode::Dense => {
            for v in a.as_mut_slice() {
                *v += sigma * rng.gaussian();
            }
        }
        PerturbMode::Rank1 => {
            let u = rng.gaussian_vec(n);
            let w = rng.gaussian_vec(n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] += sigma * u[i] * w[j];
                }
            }
        }
    }
    lp.with_constraints(a)
}

pub fn perturbed_pivots(n: usize, mode: PerturbMode, sigma: f64, trials: u64, seed: Seed) -> Result<PivotStats> {
    if trials == 0 {
        return Err(Error::Precondition("need at least one trial".into()));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    let cap = default_max_pivots(n);
    let per_trial = run_trials(trials, seed, |s| {
        let lp = perturbed_klee_minty(n, mode, sigma, s)?;
        Ok(dantzig_solve(&lp, cap)?.pivots)
    })?;
    let mean = per_trial.iter().sum::<usize>() as f64 / per_trial.len() as f64;
    Ok(PivotStats {
        mean,
        min: *per_trial.iter().min().unwrap_or(&0),
        max: *per_trial.iter().max().unwrap_or(&0),
        per_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn certify(lp: &LinearProgram, res: &SimplexResult) {
        assert_eq!(res.status, SimplexStatus::Optimal);
        assert!(res.reduced_costs.iter().all(|&r| r >= -OPT_TOL));
        let ax = lp.a.matvec(&res.x).unwrap();
        for (lhs, rhs) in ax.iter().zip(&lp.b) {
            assert!(*lhs <= rhs + 1e-9 * rhs.abs().max(1.0), "{lhs} > {rhs}");
        }
        assert!(res.x.iter().all(|&v| v >= -1e-9));
        let cx: f64 = lp.c.iter().zip(&res.x).map(|(c, x)| c * x).sum();
        assert!((cx - res.objective_value).abs() <= 1e-9 * cx.abs().max(1.0));
    }

    #[test]
    fn one_variable() {
        let lp = LinearProgram::new(vec![1.0], DenseMatrix::identity(1), vec![1.0]).unwrap();
        let res = dantzig_solve(&lp, 10).unwrap();
        assert_eq!(res.pivots, 1);
        assert_eq!(res.objective_value, 1.0);
        certify(&lp, &res);
    }

    #[test]
    fn unbounded() {
        let lp = LinearProgram::new(vec![1.0], DenseMatrix::zeros(1, 1), vec![1.0]).unwrap();
        assert_eq!(dantzig_solve(&lp, 10).unwrap().status, SimplexStatus::Unbounded);
    }

    #[test]
    fn negative_rhs() {
        let lp = LinearProgram::new(vec![1.0], DenseMatrix::identity(1), vec![-1.0]).unwrap();
        assert!(matches!(dantzig_solve(&lp, 10), Err(Error::InfeasibleStart { row: 0, .. })));
    }

    #[test]
    fn cycle_limit() {
        let lp = klee_minty_lp(5).unwrap();
        let res = dantzig_solve(&lp, 3).unwrap();
        assert_eq!(res.status, SimplexStatus::CycleLimit);
        assert_eq!(res.pivots, 3);
    }

    #[test]
    fn klee_minty_small() {
        let lp = klee_minty_lp(1).unwrap();
        let res = dantzig_solve(&lp, 10).unwrap();
        assert_eq!(res.objective_value, 5.0);
        assert!(klee_minty_lp(0).is_err());
        assert!(klee_minty_lp(21).is_err());
    }

    #[test]
    fn klee_minty_exponential_path() {
        for n in 1..=12 {
            let lp = klee_minty_lp(n).unwrap();
            let res = dantzig_solve(&lp, default_max_pivots(n)).unwrap();
            assert_eq!(res.pivots, (1 << n) - 1, "n = {n}");
            assert_eq!(res.objective_value, 5f64.powi(n as i32));
            certify(&lp, &res);
        }
    }

    #[test]
    fn perturbed_instances_certify() {
        for mode in PerturbMode::ALL {
            for t in 0..5 {
                let lp = perturbed_klee_minty(6, mode, 0.1, Seed::new(9, 0).trial(t)).unwrap();
                let res = dantzig_solve(&lp, 10_000).unwrap();
                if res.status == SimplexStatus::Optimal {
                    certify(&lp, &res);
                }
            }
        }
    }

    #[test]
    fn none_mode_is_exact() {
        let stats = perturbed_pivots(5, PerturbMode::None, 0.1, 4, Seed::new(1, 0)).unwrap();
        assert!(stats.per_trial.iter().all(|&p| p == 31));
        assert_eq!(stats.mean, 31.0);
    }

    #[test]
    fn mode_names() {
        for m in PerturbMode::ALL {
            assert_eq!(m.name().parse::<PerturbMode>().unwrap(), m);
        }
        assert!("sparse".parse::<PerturbMode>().is_err());
    }
}
