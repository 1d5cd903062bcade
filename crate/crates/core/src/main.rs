use std::process::ExitCode;

use anyhow::Context;
use circle_cs::cli::{emit, run, Args, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    match try_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn try_main() -> anyhow::Result<bool> {
    let cfg = RunConfig::from_args(Args::parse())?;
    let output = run(&cfg)?;
    emit(&output, &cfg.output_path).with_context(|| format!("writing {}", cfg.output_path))?;
    Ok(output.success)
}
