//! The registered experiments. Each returns typed rows; [`run`] turns them
//! into a CSV [`Table`].

use lowrank_core::bounds::{run_trials, McEstimate, SnStudy};
use lowrank_core::families::{gen_antidiag, rademacher_counterexample};
use lowrank_core::kmeans::{ball_prob_mc, product_cdf_quadrature, BallMode, BallProbQuery};
use lowrank_core::krylov::{cg_solve, chebyshev_spectrum, linear_spectrum, smoothed_spd_system, CgReport};
use lowrank_core::linalg::{svd_values, SINGULAR_RELATIVE};
use lowrank_core::operator::{Base, LowRankUpdate, PerturbedOperator};
use lowrank_core::simplex::{perturbed_pivots, PerturbMode, PivotStats};
use lowrank_core::stats::mean;
use lowrank_core::{DistributionSpec, Result, Seed};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{num, opt_num, Table};
use crate::timing::{available_memory, median_ns, WARMUPS};

pub const BOUNDS_HEADER: [&str; 10] =
    ["experiment", "n", "k", "dist", "threshold", "trials", "p_hat", "ci_low", "ci_high", "seed"];

/// One Monte Carlo probability estimate in the bounds CSV layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub experiment: &'static str,
    pub n: usize,
    pub k: usize,
    pub dist: String,
    pub threshold: f64,
    pub est: McEstimate,
}

impl BoundsRow {
    fn cells(&self) -> Vec<String> {
        vec![
            self.experiment.to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.dist.clone(),
            num(self.threshold),
            self.est.trials.to_string(),
            num(self.est.p_hat),
            num(self.est.ci_low),
            num(self.est.ci_high),
            self.est.seed.master.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1aRow {
    pub n: usize,
    pub s_orig: f64,
    pub s_rank1_mean: f64,
    pub s_dense_mean: f64,
}

/// Smallest singular value of the anti-diagonal family, alone and with
/// `σ G` (dense Gaussian) or `σ u vᵀ` (rank-1 Gaussian) added, averaged over
/// `trials`.
pub fn fig1a(n_values: &[usize], trials: u64, sigma: f64, master: u64) -> Result<Vec<Fig1aRow>> {
    n_values
        .iter()
        .map(|&n| {
            let m = gen_antidiag(n)?.to_dense();
            let s_orig = svd_values(&m)?.smallest();
            let pairs = run_trials(trials, Seed::new(master, 0), |s| {
                let mut rng = s.rng();
                let mut dense = rng.gaussian_matrix(n, n);
                dense.scale(sigma);
                let dense = m.add(&dense)?;
                let u = rng.gaussian_vec(n);
                let v = rng.gaussian_vec(n);
                let mut rank1 = m.clone();
                for i in 0..n {
                    for j in 0..n {
                        rank1[(i, j)] += sigma * u[i] * v[j];
                    }
                }
                Ok((svd_values(&rank1)?.smallest(), svd_values(&dense)?.smallest()))
            })?;
            let r1: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let de: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            Ok(Fig1aRow {
                n,
                s_orig,
                s_rank1_mean: mean(&r1).unwrap_or(f64::NAN),
                s_dense_mean: mean(&de).unwrap_or(f64::NAN),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1bRow {
    pub n: usize,
    pub time_rank1_ns: f64,
    /// `None` when the dense matrix does not fit in available memory.
    pub time_dense_ns: Option<f64>,
}

/// Whether an `n x n` f64 matrix fits in 80% of available memory.
pub fn dense_fits(n: usize) -> bool {
    let bytes = (n as u128) * (n as u128) * 8;
    match available_memory() {
        Some(avail) => bytes * 5 <= avail as u128 * 4,
        None => true,
    }
}

/// Matvec time of the anti-diagonal CSR matrix plus a Gaussian rank-1
/// update, against the same operator densified.
pub fn fig1b(n_values: &[usize], reps: usize, master: u64) -> Result<Vec<Fig1bRow>> {
    n_values
        .iter()
        .map(|&n| {
            let mut rng = Seed::new(master, 0).rng();
            let u = rng.gaussian_vec(n);
            let v = rng.gaussian_vec(n);
            let x = rng.gaussian_vec(n);
            let op = PerturbedOperator::new(
                Base::Csr(gen_antidiag(n)?),
                Some(LowRankUpdate::rank_one(&u, &v)?),
            )?;
            let mut y = vec![0.0; n];
            let time_rank1_ns = median_ns(WARMUPS, reps, || {
                op.apply_into(&x, &mut y).expect("dimensions agree");
                std::hint::black_box(&y);
            });
            let time_dense_ns = if dense_fits(n) {
                let dense = op.to_dense_with_cap(n)?;
                Some(median_ns(WARMUPS, reps, || {
                    dense.matvec_into(&x, &mut y).expect("dimensions agree");
                    std::hint::black_box(&y);
                }))
            } else {
                None
            };
            Ok(Fig1bRow { n, time_rank1_ns, time_dense_ns })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KleeMintyRow {
    pub n: usize,
    pub mode: PerturbMode,
    pub sigma: f64,
    pub trials: u64,
    pub stats: PivotStats,
    pub seed: u64,
}

pub fn kleeminty(n_values: &[usize], sigma: f64, trials: u64, master: u64) -> Result<Vec<KleeMintyRow>> {
    let mut rows = Vec::new();
    for &n in n_values {
        for mode in PerturbMode::ALL {
            let stats = perturbed_pivots(n, mode, sigma, trials, Seed::new(master, 0))?;
            rows.push(KleeMintyRow { n, mode, sigma, trials, stats, seed: master });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallRow {
    pub mode: BallMode,
    pub query: BallProbQuery,
    pub est: McEstimate,
    /// Numerical integral of the rank-1 law; `None` for dense noise.
    pub quadrature: Option<f64>,
}

pub fn kmeans_ball(d_values: &[usize], eps: f64, sigma: f64, trials: u64, master: u64) -> Result<Vec<BallRow>> {
    let mut rows = Vec::new();
    for &d in d_values {
        let query = BallProbQuery::new(d, eps, sigma)?;
        for mode in BallMode::ALL {
            let est = ball_prob_mc(&query, mode, trials, Seed::new(master, 0))?;
            let quadrature = match mode {
                BallMode::Rank1Product => Some(product_cdf_quadrature(&query)?),
                BallMode::DenseGaussian => None,
            };
            rows.push(BallRow { mode, query, est, quadrature });
        }
    }
    Ok(rows)
}

/// Fraction of Rademacher-perturbed counterexamples that are singular.
pub fn rademacher(n_values: &[usize], trials: u64, master: u64) -> Result<Vec<BoundsRow>> {
    n_values
        .iter()
        .map(|&n| {
            let seed = Seed::new(master, 0);
            let flags = run_trials(trials, seed, |s| Ok(rademacher_counterexample(n, s)?.1))?;
            let hits = flags.iter().filter(|&&f| f).count() as u64;
            Ok(BoundsRow {
                experiment: "rademacher",
                n,
                k: 1,
                dist: DistributionSpec::Rademacher.to_string(),
                threshold: SINGULAR_RELATIVE,
                est: McEstimate::from_counts(hits, trials, seed)?,
            })
        })
        .collect()
}

pub const REMARK_T: [f64; 3] = [0.02, 0.05, 0.1];

/// `P(s_n ≤ t²)` for `diag(1, ..., 1, 0) + g gᵀ`.
pub fn remark_sqrt_eps(n_values: &[usize], ts: &[f64], trials: u64, master: u64) -> Result<Vec<BoundsRow>> {
    let mut rows = Vec::new();
    for &n in n_values {
        let study = SnStudy::rank_deficient(n, 1, DistributionSpec::RealGaussianUnit, true)?;
        let seed = Seed::new(master, 0);
        let samples = study.sample_smallest(trials, seed)?;
        for &t in ts {
            rows.push(BoundsRow {
                experiment: "remark_sqrt_eps",
                n,
                k: 1,
                dist: study.dist.to_string(),
                threshold: t * t,
                est: McEstimate::below(&samples, t * t, seed)?,
            });
        }
    }
    Ok(rows)
}

/// `ε = 4^-1, ..., 4^-5`.
pub fn scaling_eps() -> Vec<f64> {
    (1..=5).map(|i| 4f64.powi(-i)).collect()
}

/// `P(s_n ≤ ε s_{n-k} / (n k))` on spectrum `(1, ..., 1, 0, ..., 0)` with
/// `k` zeros, for each `ε` of [`scaling_eps`]. The same samples serve every
/// threshold.
pub fn main_scaling(
    n_values: &[usize],
    k: usize,
    dist: DistributionSpec,
    symmetric: bool,
    trials: u64,
    master: u64,
) -> Result<Vec<BoundsRow>> {
    let mut rows = Vec::new();
    for &n in n_values {
        let study = SnStudy::rank_deficient(n, k, dist, symmetric)?;
        let seed = Seed::new(master, 0);
        let samples = study.sample_smallest(trials, seed)?;
        for eps in scaling_eps() {
            let threshold = eps / (n * k) as f64;
            rows.push(BoundsRow {
                experiment: "main_scaling",
                n,
                k,
                dist: dist.to_string(),
                threshold,
                est: McEstimate::below(&samples, threshold, seed)?,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgRow {
    pub system: &'static str,
    pub n: usize,
    pub kappa: f64,
    pub report: CgReport,
}

pub const CG_TOL: f64 = 1e-8;
pub const CG_KAPPAS: [f64; 3] = [1e2, 1e3, 1e4];

/// CG iteration counts on diagonal systems with Chebyshev-node and evenly
/// spaced spectra, and on `trials` smoothed systems `diag(1, ..., 1, 0) + g gᵀ`.
pub fn cg_bench(n_values: &[usize], trials: u64, master: u64) -> Result<Vec<CgRow>> {
    let mut rows = Vec::new();
    for &n in n_values {
        let b = vec![1.0; n];
        for (system, spectrum) in [
            ("chebyshev_diag", chebyshev_spectrum as fn(usize, f64) -> Vec<f64>),
            ("linear_diag", linear_spectrum),
        ] {
            for kappa in CG_KAPPAS {
                let op = PerturbedOperator::unperturbed(Base::Diagonal(spectrum(n, kappa)))?;
                let (_, report) = cg_solve(&op, &b, CG_TOL, 10 * n)?;
                rows.push(CgRow { system, n, kappa, report });
            }
        }
        let outcomes = run_trials(trials, Seed::new(master, 0), |s| {
            let g = s.rng().gaussian_vec(n);
            let (op, kappa) = smoothed_spd_system(&g)?;
            let (_, report) = cg_solve(&op, &b, CG_TOL, 10 * n)?;
            Ok((kappa, report))
        })?;
        rows.extend(
            outcomes
                .into_iter()
                .map(|(kappa, report)| CgRow { system: "smoothed_rank1", n, kappa, report }),
        );
    }
    Ok(rows)
}

/// Runs the configured experiment and lays its rows out as CSV.
pub fn run(cfg: &ExperimentConfig) -> Result<Table> {
    let ns = &cfg.n_values;
    let seed = cfg.seed;
    let table = match cfg.experiment {
        Experiment::Fig1a => {
            let mut t = Table::new(&["n", "s_orig", "s_rank1_mean", "s_dense_mean"]);
            for r in fig1a(ns, cfg.trials, cfg.sigma, seed)? {
                t.push(vec![r.n.to_string(), num(r.s_orig), num(r.s_rank1_mean), num(r.s_dense_mean)]);
            }
            t
        }
        Experiment::Fig1b => {
            let mut t = Table::new(&["n", "time_rank1_ns", "time_dense_ns"]);
            for r in fig1b(ns, cfg.trials as usize, seed)? {
                t.push(vec![r.n.to_string(), num(r.time_rank1_ns), opt_num(r.time_dense_ns)]);
            }
            t
        }
        Experiment::KleeMinty => {
            let mut t = Table::new(&[
                "n", "mode", "sigma", "trials", "mean_pivots", "min_pivots", "max_pivots", "seed",
            ]);
            for r in kleeminty(ns, cfg.sigma, cfg.trials, seed)? {
                t.push(vec![
                    r.n.to_string(),
                    r.mode.to_string(),
                    num(r.sigma),
                    r.trials.to_string(),
                    num(r.stats.mean),
                    r.stats.min.to_string(),
                    r.stats.max.to_string(),
                    r.seed.to_string(),
                ]);
            }
            t
        }
        Experiment::KmeansBall => {
            let mut t = Table::new(&[
                "mode", "d", "eps", "sigma", "trials", "p_hat", "ci_low", "ci_high", "quadrature",
            ]);
            for r in kmeans_ball(ns, cfg.eps, cfg.sigma, cfg.trials, seed)? {
                t.push(vec![
                    r.mode.to_string(),
                    r.query.d.to_string(),
                    num(r.query.eps),
                    num(r.query.sigma),
                    r.est.trials.to_string(),
                    num(r.est.p_hat),
                    num(r.est.ci_low),
                    num(r.est.ci_high),
                    opt_num(r.quadrature),
                ]);
            }
            t
        }
        Experiment::Rademacher => bounds_table(rademacher(ns, cfg.trials, seed)?),
        Experiment::RemarkSqrtEps => bounds_table(remark_sqrt_eps(ns, &REMARK_T, cfg.trials, seed)?),
        Experiment::MainScaling => {
            bounds_table(main_scaling(ns, cfg.k, cfg.dist, !cfg.independent, cfg.trials, seed)?)
        }
        Experiment::CgBench => {
            let mut t = Table::new(&["system", "n", "kappa", "iterations", "final_residual", "converged"]);
            for r in cg_bench(ns, cfg.trials, seed)? {
                t.push(vec![
                    r.system.to_string(),
                    r.n.to_string(),
                    num(r.kappa),
                    r.report.iterations.to_string(),
                    num(r.report.final_residual),
                    r.report.converged.to_string(),
                ]);
            }
            t
        }
    };
    Ok(table)
}

fn bounds_table(rows: Vec<BoundsRow>) -> Table {
    let mut t = Table::new(&BOUNDS_HEADER);
    for r in rows {
        t.push(r.cells());
    }
    t
}
