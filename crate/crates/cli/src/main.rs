//! `barycut`: solve, sweep, analyse and benchmark cutoff barycenter problems.
//!
//! Exit codes: 0 on success, 2 when an input cannot be read or parsed, 64 on
//! invalid flags or unsupported parameter combinations.

mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.into_config().and_then(|cfg| commands::run(&cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("barycut: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 64,
                CliError::Input(_) => 2,
            })
        }
    }
}
