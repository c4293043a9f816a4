//! `llr`: lessons-learned retrieval from the command line.

mod args;
mod commands;
mod settings;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use llr_core::ErrorKind;

/// An invalid combination of arguments detected after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err
        .downcast_ref::<llr_core::Error>()
        .map(llr_core::Error::kind)
    {
        Some(ErrorKind::Usage) => 1,
        Some(ErrorKind::Data) => 2,
        Some(ErrorKind::Internal) | None => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
