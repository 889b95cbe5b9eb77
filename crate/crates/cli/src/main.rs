//! `noisy-lis`: generation, single runs, sweeps and experiments.
//!
//! Exit codes: 0 on success, 1 for invalid configuration, 2 when a run
//! fails after it started.

mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Run(a) => commands::run(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Lowerbound(a) => commands::lowerbound(a),
        Command::DislCurve(a) => commands::disl_curve(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("error: {m}"),
                Failure::Runtime(m) => eprintln!("error: run failed: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
