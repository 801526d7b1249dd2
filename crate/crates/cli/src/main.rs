use std::process::ExitCode;

use lowrank_smooth::{run_cli, CliError};

fn main() -> ExitCode {
    match run_cli(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => e.exit(),
        Err(e) => {
            eprintln!("lowrank-smooth: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
