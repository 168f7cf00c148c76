//! `detkit`: verify, enforce and inspect detectability of labeled automata.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;

/// Failures reported with exit status 2.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn input(message: impl std::fmt::Display) -> Self {
        CliError {
            kind: "input",
            message: message.to_string(),
        }
    }
}

fn report(err: &CliError, as_json: bool) -> ExitCode {
    eprintln!("error: {}", err.message);
    if as_json {
        println!("{}", json!({"error": {"kind": err.kind, "message": err.message}}));
    }
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let wants_json = std::env::args().any(|a| a == "--error-json");
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if wants_json {
                let message = e.to_string();
                let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
                return report(&CliError::usage(first), true);
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match commands::run(&cli) {
        Ok(success) => ExitCode::from(if success { 0 } else { 1 }),
        Err(e) => report(&e, cli.error_json),
    }
}
