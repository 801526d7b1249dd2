//! Experiment runner for low-rank perturbation studies.
//!
//! ```text
//! lowrank-smooth <experiment> [--n LIST | --n-range a:b:step] [--k K]
//!     [--dist gaussian|complex|rademacher|sphere] [--sigma S] [--eps E]
//!     [--trials T] [--seed U64] [--out PATH] [--config PATH] [--independent]
//! ```
//!
//! Every run writes one CSV file: a header row, the data rows and a final
//! `# seed=<master>` line. Exit status is 0 on success, 2 for configuration
//! problems and 3 when an experiment fails numerically.

pub mod config;
mod error;
pub mod experiments;
pub mod output;
pub mod timing;

pub use config::{Experiment, ExperimentConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_NUMERICAL};

/// Parses `args`, runs the experiment and writes its CSV.
pub fn run_cli<I, T>(args: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = ExperimentConfig::from_args(args)?;
    let table = experiments::run(&cfg)?;
    table.write_to(cfg.seed, cfg.out.as_deref())
}
