use std::process::ExitCode;

use rikitake_core::models::{catalog_item, CATALOG_NAMES};

use super::core_err;
use crate::args::ShowArgs;
use crate::usage;

pub fn run(args: ShowArgs) -> anyhow::Result<ExitCode> {
    if !CATALOG_NAMES.contains(&args.name.as_str()) {
        return Err(usage(format!(
            "unknown catalog name `{}` (expected one of {})",
            args.name,
            CATALOG_NAMES.join(", ")
        )));
    }
    let item = catalog_item(&args.name, &args.beta, &args.k1, &args.k2).map_err(core_err)?;
    println!("{item}");
    Ok(ExitCode::SUCCESS)
}
