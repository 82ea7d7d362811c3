use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cvtele_cli::args::Cli;
use cvtele_cli::{render, run_with_workers, CliError};

fn execute(cli: Cli) -> Result<(), CliError> {
    let (cfg, common) = cli.into_config()?;
    let table = run_with_workers(&cfg, common.workers)?;
    let text = render(&cfg, &table)?;
    match common.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cvtele: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
