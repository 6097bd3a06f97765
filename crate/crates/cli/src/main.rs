//! `rikitake`: run the symbolic certificate suite, simulate trajectories and
//! analyze drift, conjugacy and Newton residuals.
//!
//! Exit codes: 0 all pass, 1 at least one failure (or an I/O error),
//! 2 usage or parameter-domain error.

mod args;
mod cmd;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// An error attributable to the invocation rather than the computation.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => cmd::verify::run(a),
        Command::Simulate(a) => cmd::simulate::run(a),
        Command::Analyze(a) => cmd::analyze::run(a),
        Command::Show(a) => cmd::show::run(a),
    };
    match result {
        Ok(code) => code,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}");
            eprintln!("run `rikitake --help` for usage");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
