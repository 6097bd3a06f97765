use std::fmt::Write as _;
use std::process::ExitCode;

use rikitake_core::integrate::integrate_with;

use super::{build_system, check_x0, core_err, fmt_f64, monitored, step_options, write_file};
use crate::args::SimulateArgs;

pub fn run(args: SimulateArgs) -> anyhow::Result<ExitCode> {
    let sys = build_system(args.system.into(), &args.beta)?;
    let x0 = &args.x0.0;
    check_x0(&sys, x0)?;
    let opts = step_options(&args.solver)?;
    let cols = monitored(&sys)?;
    let traj = integrate_with(&sys, x0, args.dt, args.steps, args.method.into(), &opts)
        .map_err(core_err)?;

    let mut header = vec!["t"];
    header.extend(sys.field.ring().names().iter().map(String::as_str));
    header.extend(cols.iter().map(|(n, _)| *n));
    let mut csv = header.join(",");
    csv.push('\n');
    for s in &traj.samples {
        let mut row = vec![fmt_f64(s.time)];
        row.extend(s.coords.iter().map(|&v| fmt_f64(v)));
        row.extend(cols.iter().map(|(_, f)| fmt_f64(f.eval(&s.coords))));
        writeln!(csv, "{}", row.join(","))?;
    }
    write_file(&args.out, &csv)?;
    eprintln!(
        "wrote {} samples to {}",
        traj.samples.len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}
