use std::process::ExitCode;

use rikitake_core::algebra::rat_int;
use rikitake_core::integrate::{
    conjugacy_gap_with, integrate_with, invariant_drift, newton_residual_along_with, SystemId,
};
use rikitake_core::{format_rational, Method, Rational};
use serde::Serialize;

use super::{build_system, check_x0, core_err, monitored, step_options, write_file};
use crate::args::{AnalyzeArgs, Mode};
use crate::usage;

const R3_X0: [f64; 3] = [1.0, 2.0, 3.0];
const R4_W0: [f64; 4] = [0.4, 0.0, 0.3, 0.2];

#[derive(Serialize)]
struct Params {
    system: SystemId,
    beta: String,
    x0: Vec<f64>,
    dt: f64,
    steps: usize,
    method: Method,
    tol: f64,
}

#[derive(Serialize)]
struct Summary {
    mode: &'static str,
    params: Params,
    max_abs: f64,
    pass: bool,
}

pub fn run(args: AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let opts = step_options(&args.solver)?;
    let method: Method = args.method.into();
    if args.mode != Mode::Drift && args.system.is_some() {
        return Err(usage("--system only applies to --mode drift"));
    }
    let system = args.system.map_or(
        if args.mode == Mode::Drift {
            SystemId::R3
        } else {
            SystemId::R4
        },
        Into::into,
    );
    let (mode, tol_default) = match args.mode {
        Mode::Drift => ("drift", 1e-8),
        Mode::Conjugacy => ("conjugacy", 1e-6),
        Mode::NewtonResidual => ("newton-residual", 1e-9),
    };
    // r3 drift defaults to the beta = 0 system; everything on R^4 needs beta != 0.
    let beta_default = if system == SystemId::R3 { 0 } else { 1 };
    let beta: Rational = args.beta.clone().unwrap_or_else(|| rat_int(beta_default));
    let sys = build_system(system, &beta)?;
    let x0 = match &args.x0 {
        Some(c) => c.0.clone(),
        None if system == SystemId::R3 => R3_X0.to_vec(),
        None => R4_W0.to_vec(),
    };
    check_x0(&sys, &x0)?;
    let tol = args.tol.unwrap_or(tol_default);

    let max_abs = match args.mode {
        Mode::Drift => {
            let traj =
                integrate_with(&sys, &x0, args.dt, args.steps, method, &opts).map_err(core_err)?;
            let mut worst: f64 = 0.0;
            for (_, f) in monitored(&sys)? {
                worst = worst.max(invariant_drift(&traj, &f).map_err(core_err)?.max_abs_dev);
            }
            worst
        }
        Mode::Conjugacy => {
            conjugacy_gap_with(&beta, &x0, args.dt, args.steps, method, &opts).map_err(core_err)?
        }
        Mode::NewtonResidual => {
            newton_residual_along_with(&beta, &x0, args.dt, args.steps, method, &opts)
                .map_err(core_err)?
        }
    };
    let pass = max_abs <= tol;
    let summary = Summary {
        mode,
        params: Params {
            system,
            beta: format_rational(&beta),
            x0,
            dt: args.dt,
            steps: args.steps,
            method,
            tol,
        },
        max_abs,
        pass,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    print!("{json}");
    if let Some(path) = &args.out {
        write_file(path, &json)?;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
