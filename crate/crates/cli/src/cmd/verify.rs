use std::process::ExitCode;

use rikitake_core::format_rational;
use rikitake_core::verify::{run_suite, Status};

use super::write_file;
use crate::args::VerifyArgs;

const RESIDUAL_WIDTH: usize = 60;

fn summarize(text: &str) -> String {
    if text.chars().count() <= RESIDUAL_WIDTH {
        text.to_string()
    } else {
        let head: String = text.chars().take(RESIDUAL_WIDTH - 3).collect();
        format!("{head}...")
    }
}

pub fn run(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let report = run_suite(&args.beta, args.seed);
    println!(
        "beta = {}  seed = {}",
        format_rational(&args.beta),
        args.seed
    );
    for c in &report.checks {
        let residual = c.residual.as_deref().map_or("-".to_string(), summarize);
        println!("{:<28} {:<8} {}", c.name, c.status.to_string(), residual);
        if let Some(w) = &c.witness {
            println!("{:<28} {:<8} nonzero at {}", "", "", w);
        }
    }
    println!(
        "{} checks: {} pass, {} fail, {} skipped",
        report.checks.len(),
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Skipped)
    );
    if let Some(path) = &args.json {
        let mut json = serde_json::to_string_pretty(&report)?;
        json.push('\n');
        write_file(path, &json)?;
    }
    Ok(if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
