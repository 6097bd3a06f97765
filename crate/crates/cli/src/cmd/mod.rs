pub mod analyze;
pub mod show;
pub mod simulate;
pub mod verify;

use std::path::Path;

use anyhow::Context;
use rikitake_core::algebra::rat_int;
use rikitake_core::integrate::{
    CompiledScalar, IntegrateError, NumericSystem, StepOptions, SystemId,
};
use rikitake_core::models::{c_beta, canonical_system, h1, h2, h_beta, phi_map};
use rikitake_core::{Error, MultiPoly, Rational};

use crate::args::SolverArgs;
use crate::usage;

/// Parameter-domain and shape errors are the caller's fault (exit 2);
/// everything else is a failed computation (exit 1).
pub fn core_err(e: Error) -> anyhow::Error {
    match e {
        Error::ParameterDomain(_)
        | Error::Integrate(IntegrateError::ZeroStep)
        | Error::Integrate(IntegrateError::NoSteps)
        | Error::Integrate(IntegrateError::Arity { .. }) => usage(e.to_string()),
        other => anyhow::Error::new(other),
    }
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// 17 significant digits: enough to round-trip binary64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn step_options(s: &SolverArgs) -> anyhow::Result<StepOptions> {
    if s.fp_tol <= 0.0 || s.fp_max_iter == 0 {
        return Err(usage(
            "--fp-tol must be positive and --fp-max-iter at least 1",
        ));
    }
    Ok(StepOptions {
        tol: s.fp_tol,
        max_iter: s.fp_max_iter,
    })
}

pub fn build_system(id: SystemId, beta: &Rational) -> anyhow::Result<NumericSystem> {
    match id {
        SystemId::R3 => Ok(NumericSystem::r3(beta)),
        SystemId::R4 => NumericSystem::r4(beta).map_err(core_err),
    }
}

pub fn check_x0(sys: &NumericSystem, x0: &[f64]) -> anyhow::Result<()> {
    if x0.len() != sys.dim() {
        return Err(usage(format!(
            "--x0 needs {} coordinates for {}, got {}",
            sys.dim(),
            sys.id,
            x0.len()
        )));
    }
    Ok(())
}

/// Monitored quantities for a system, as (column name, function).
pub fn monitored(sys: &NumericSystem) -> anyhow::Result<Vec<(&'static str, CompiledScalar)>> {
    let beta = &sys.beta;
    let compile = |p: MultiPoly| CompiledScalar::compile(&p);
    Ok(match sys.id {
        SystemId::R3 if beta == &rat_int(0) => {
            vec![("H1", compile(h1())), ("H2", compile(h2()))]
        }
        SystemId::R3 => vec![
            ("Hbeta", compile(h_beta(beta).map_err(core_err)?)),
            ("Cbeta", compile(c_beta(beta).map_err(core_err)?)),
        ],
        SystemId::R4 => {
            let h = canonical_system(beta).map_err(core_err)?.hamiltonian;
            let phi = phi_map(beta).map_err(core_err)?;
            let casimir = phi.pull_back(&c_beta(beta).map_err(core_err)?)?;
            vec![("H", compile(h)), ("p2_invariant", compile(casimir))]
        }
    })
}
