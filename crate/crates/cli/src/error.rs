use lowrank_core::Error as CoreError;
use thiserror::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Usage(#[from] clap::Error),

    #[error("{0}")]
    Core(#[from] CoreError),

    #[error("cannot write output: {0}")]
    Output(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    /// 2 for anything the caller can fix by changing the invocation, 3 for
    /// numerical failures inside an experiment.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Output(_) => EXIT_CONFIG,
            CliError::Usage(e) => e.exit_code(),
            CliError::Core(e) => match e {
                CoreError::InvalidInput(_)
                | CoreError::Precondition(_)
                | CoreError::DensifyCap { .. }
                | CoreError::Parse { .. }
                | CoreError::Io(_) => EXIT_CONFIG,
                _ => EXIT_NUMERICAL,
            },
        }
    }
}
