//! Command-line and config-file settings.
//!
//! A config file is flat `key=value` text, one pair per line, `#` starts a
//! comment. Keys are the long flag names (`n`, `n-range`, `k`, `dist`,
//! `sigma`, `eps`, `trials`, `seed`, `out`, `independent`). Flags given on
//! the command line override the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use lowrank_core::DistributionSpec;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1a,
    Fig1b,
    KleeMinty,
    KmeansBall,
    Rademacher,
    RemarkSqrtEps,
    MainScaling,
    CgBench,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Fig1a,
        Experiment::Fig1b,
        Experiment::KleeMinty,
        Experiment::KmeansBall,
        Experiment::Rademacher,
        Experiment::RemarkSqrtEps,
        Experiment::MainScaling,
        Experiment::CgBench,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1a => "fig1a",
            Experiment::Fig1b => "fig1b",
            Experiment::KleeMinty => "kleeminty",
            Experiment::KmeansBall => "kmeans_ball",
            Experiment::Rademacher => "rademacher",
            Experiment::RemarkSqrtEps => "remark_sqrt_eps",
            Experiment::MainScaling => "main_scaling",
            Experiment::CgBench => "cg_bench",
        }
    }

    fn default_n(self) -> Vec<usize> {
        match self {
            Experiment::Fig1a => (10..=60).step_by(5).collect(),
            Experiment::Fig1b => (10..=15).map(|p| 1 << p).collect(),
            Experiment::KleeMinty => (2..=10).collect(),
            Experiment::KmeansBall => vec![16, 64, 256, 1024],
            Experiment::Rademacher => vec![20],
            Experiment::RemarkSqrtEps => vec![10],
            Experiment::MainScaling => vec![50],
            Experiment::CgBench => vec![1000],
        }
    }

    fn default_trials(self) -> u64 {
        match self {
            Experiment::Fig1a | Experiment::KleeMinty => 20,
            Experiment::Fig1b => 25,
            Experiment::KmeansBall => 100_000,
            Experiment::Rademacher => 2000,
            Experiment::RemarkSqrtEps | Experiment::MainScaling => 20_000,
            Experiment::CgBench => 1,
        }
    }

    fn default_sigma(self) -> f64 {
        match self {
            Experiment::KleeMinty => 0.1,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|e| e.name()).collect();
            CliError::Config(format!(
                "unknown experiment {s:?}; registered: {}",
                names.join(", ")
            ))
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "lowrank-smooth", version, about = "Run low-rank perturbation experiments and write CSV")]
pub struct Cli {
    /// fig1a, fig1b, kleeminty, kmeans_ball, rademacher, remark_sqrt_eps, main_scaling, cg_bench
    pub experiment: String,
    /// Comma-separated sizes (dimension `d` for kmeans_ball).
    #[arg(long, value_delimiter = ',', conflicts_with = "n_range")]
    pub n: Option<Vec<usize>>,
    /// Inclusive range `start:end:step`.
    #[arg(long)]
    pub n_range: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// gaussian, complex, rademacher or sphere.
    #[arg(long)]
    pub dist: Option<String>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Ball radius for kmeans_ball.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV path; `-` writes to stdout. Defaults to `<experiment>.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// main_scaling: draw `V` independently of `U` instead of `V = U`.
    #[arg(long)]
    pub independent: bool,
}

/// Raw settings before defaults are applied.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub n: Option<Vec<usize>>,
    pub n_range: Option<String>,
    pub k: Option<usize>,
    pub dist: Option<String>,
    pub sigma: Option<f64>,
    pub eps: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub independent: Option<bool>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("{key}: cannot parse {value:?}: {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>, CliError> {
    value.split(',').map(|v| parse_value(key, v.trim())).collect()
}

impl Settings {
    pub fn from_config_text(text: &str) -> Result<Self, CliError> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("config line {}: expected key=value, got {raw:?}", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => s.n = Some(parse_list(key, value)?),
                "n-range" | "n_range" => s.n_range = Some(value.to_string()),
                "k" => s.k = Some(parse_value(key, value)?),
                "dist" => s.dist = Some(value.to_string()),
                "sigma" => s.sigma = Some(parse_value(key, value)?),
                "eps" => s.eps = Some(parse_value(key, value)?),
                "trials" => s.trials = Some(parse_value(key, value)?),
                "seed" => s.seed = Some(parse_value(key, value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "independent" => s.independent = Some(parse_value(key, value)?),
                other => {
                    return Err(CliError::Config(format!(
                        "config line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn from_config_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_config_text(&text)
    }

    fn from_cli(cli: &Cli) -> Self {
        Settings {
            n: cli.n.clone(),
            n_range: cli.n_range.clone(),
            k: cli.k,
            dist: cli.dist.clone(),
            sigma: cli.sigma,
            eps: cli.eps,
            trials: cli.trials,
            seed: cli.seed,
            out: cli.out.clone(),
            independent: cli.independent.then_some(true),
        }
    }

    /// Fields set in `over` replace those in `self`. A size list and a size
    /// range replace each other.
    pub fn overridden_by(mut self, over: Settings) -> Self {
        if over.n.is_some() || over.n_range.is_some() {
            self.n = over.n;
            self.n_range = over.n_range;
        }
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(k, dist, sigma, eps, trials, seed, out, independent);
        self
    }
}

pub fn parse_range(text: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!("n-range must be start:end:step, got {text:?}")));
    }
    let start: usize = parse_value("n-range", parts[0])?;
    let end: usize = parse_value("n-range", parts[1])?;
    let step: usize = parse_value("n-range", parts[2])?;
    if step == 0 || start > end {
        return Err(CliError::Config(format!("n-range {text:?} is empty or has zero step")));
    }
    Ok((start..=end).step_by(step).collect())
}

/// Fully resolved experiment settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_values: Vec<usize>,
    pub k: usize,
    pub dist: DistributionSpec,
    pub sigma: f64,
    pub eps: f64,
    pub trials: u64,
    pub seed: u64,
    /// `None` means stdout.
    pub out: Option<PathBuf>,
    pub independent: bool,
}

pub const DEFAULT_SEED: u64 = 20240501;

impl ExperimentConfig {
    pub fn resolve(experiment: Experiment, s: Settings) -> Result<Self, CliError> {
        let n_values = match (s.n, s.n_range) {
            (Some(list), _) => list,
            (None, Some(range)) => parse_range(&range)?,
            (None, None) => experiment.default_n(),
        };
        if n_values.is_empty() {
            return Err(CliError::Config("size list is empty".into()));
        }
        if n_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Config(format!("sizes must be strictly ascending, got {n_values:?}")));
        }
        let dist = match s.dist {
            Some(d) => d.parse().map_err(|e| CliError::Config(format!("{e}")))?,
            None => DistributionSpec::RealGaussianUnit,
        };
        let sigma = s.sigma.unwrap_or(experiment.default_sigma());
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(CliError::Config(format!("sigma must be finite and >= 0, got {sigma}")));
        }
        let eps = s.eps.unwrap_or(0.05);
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(CliError::Config(format!("eps must be finite and >= 0, got {eps}")));
        }
        let trials = s.trials.unwrap_or(experiment.default_trials());
        if trials == 0 {
            return Err(CliError::Config("trials must be >= 1".into()));
        }
        let k = s.k.unwrap_or(1);
        if k == 0 {
            return Err(CliError::Config("k must be >= 1".into()));
        }
        let out = match s.out {
            Some(p) if p.as_os_str() == "-" => None,
            Some(p) => Some(p),
            None => Some(PathBuf::from(format!("{}.csv", experiment.name()))),
        };
        Ok(Self {
            experiment,
            n_values,
            k,
            dist,
            sigma,
            eps,
            trials,
            seed: s.seed.unwrap_or(DEFAULT_SEED),
            out,
            independent: s.independent.unwrap_or(false),
        })
    }

    /// Parses `args` (program name first), merging the config file if one is named.
    pub fn from_args<I, T>(args: I) -> Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        Self::from_cli(&cli)
    }

    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let experiment: Experiment = cli.experiment.parse()?;
        let base = match &cli.config {
            Some(path) => Settings::from_config_file(path)?,
            None => Settings::default(),
        };
        Self::resolve(experiment, base.overridden_by(Settings::from_cli(cli)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<ExperimentConfig, CliError> {
        ExperimentConfig::from_args(std::iter::once("lowrank-smooth").chain(args.iter().copied()))
    }

    #[test]
    fn defaults() {
        let c = cfg(&["kleeminty"]).unwrap();
        assert_eq!(c.sigma, 0.1);
        assert_eq!(c.trials, 20);
        assert_eq!(c.n_values, (2..=10).collect::<Vec<_>>());
        assert_eq!(c.out.as_deref(), Some(Path::new("kleeminty.csv")));
    }

    #[test]
    fn list_and_range() {
        assert_eq!(cfg(&["fig1a", "--n", "8,16,32"]).unwrap().n_values, vec![8, 16, 32]);
        assert_eq!(cfg(&["fig1a", "--n-range", "10:30:10"]).unwrap().n_values, vec![10, 20, 30]);
        assert!(cfg(&["fig1a", "--n", "8", "--n-range", "1:2:1"]).is_err());
        assert!(cfg(&["fig1a", "--n", "16,8"]).is_err());
        assert!(cfg(&["fig1a", "--n-range", "5:1:1"]).is_err());
        assert!(cfg(&["fig1a", "--n-range", "1:5:0"]).is_err());
    }

    #[test]
    fn unknown_experiment_lists_names() {
        let err = cfg(&["fig9"]).unwrap_err().to_string();
        assert!(err.contains("fig1a") && err.contains("cg_bench"), "{err}");
    }

    #[test]
    fn config_text_and_override() {
        let file = Settings::from_config_text("# comment\nn = 4,8\nsigma=0.5\nseed=7 # trailing\n").unwrap();
        assert_eq!(file.n, Some(vec![4, 8]));
        let over = Settings { sigma: Some(2.0), n_range: Some("1:3:1".into()), ..Default::default() };
        let merged = file.overridden_by(over);
        assert_eq!(merged.sigma, Some(2.0));
        assert_eq!(merged.seed, Some(7));
        let c = ExperimentConfig::resolve(Experiment::Fig1a, merged).unwrap();
        assert_eq!(c.n_values, vec![1, 2, 3]);
    }

    #[test]
    fn config_errors() {
        assert!(Settings::from_config_text("bogus=1").is_err());
        assert!(Settings::from_config_text("trials").is_err());
        assert!(Settings::from_config_text("trials=abc").is_err());
    }

    #[test]
    fn stdout_and_dist() {
        let c = cfg(&["main_scaling", "--out", "-", "--dist", "complex"]).unwrap();
        assert_eq!(c.out, None);
        assert_eq!(c.dist, DistributionSpec::ComplexGaussianHalf);
        assert!(cfg(&["main_scaling", "--dist", "cauchy"]).is_err());
    }
}
