use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rikitake_core::integrate::{Method, SystemId};
use rikitake_core::{parse_rational, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "rikitake",
    version,
    about = "Exact certificates and simulation for a Rikitake dynamo variant"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the named symbolic checks.
    Verify(VerifyArgs),
    /// Integrate a trajectory and write it as CSV.
    Simulate(SimulateArgs),
    /// Summarize drift, conjugacy gap or Newton residual as JSON.
    Analyze(AnalyzeArgs),
    /// Print a catalog object.
    Show(ShowArgs),
}

/// Rationals as `n`, `n/d` or an exact decimal such as `0.25` or `1e-3`.
pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim(), true).ok_or_else(|| format!("`{s}` is not a rational number"))
}

/// A comma-separated state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Coords(pub Vec<f64>);

pub fn coords_arg(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("`{t}` is not a finite number"))
        })
        .collect::<Result<_, _>>()
        .map(Coords)
}

fn finite_arg(s: &str) -> Result<f64, String> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub beta: Rational,
    /// Write the report as JSON to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Seed for witness points shown next to falsification checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemArg {
    R3,
    R4,
}

impl From<SystemArg> for SystemId {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::R3 => SystemId::R3,
            SystemArg::R4 => SystemId::R4,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Rk4,
    Midpoint,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Midpoint => Method::Midpoint,
        }
    }
}

/// Fixed-point settings for the implicit midpoint rule.
#[derive(Args, Debug, Clone, Copy)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-14, value_parser = finite_arg)]
    pub fp_tol: f64,
    #[arg(long, default_value_t = 50)]
    pub fp_max_iter: usize,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub system: SystemArg,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    pub beta: Rational,
    /// Initial state, comma separated.
    #[arg(long, value_parser = coords_arg, allow_hyphen_values = true)]
    pub x0: Coords,
    #[arg(long, default_value_t = 1e-3, value_parser = finite_arg, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Drift,
    Conjugacy,
    NewtonResidual,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// drift only; conjugacy and newton-residual always use both systems or r4.
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
    pub beta: Option<Rational>,
    #[arg(long, value_parser = coords_arg, allow_hyphen_values = true)]
    pub x0: Option<Coords>,
    #[arg(long, default_value_t = 1e-3, value_parser = finite_arg, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    /// Pass threshold on max_abs; defaults depend on the mode.
    #[arg(long, value_parser = finite_arg)]
    pub tol: Option<f64>,
    /// Also write the JSON summary to this path.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct ShowArgs {
    /// One of the catalog names (pi1, pi2, pibeta, H1, H2, Hbeta, Cbeta, V, euler, master, phi, canonical).
    pub name: String,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "1")]
    pub beta: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "1")]
    pub k1: Rational,
    #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
    pub k2: Rational,
}
