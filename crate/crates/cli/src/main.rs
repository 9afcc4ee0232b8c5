use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use tropical_refine_cli::{run, Cli, CliError, RunConfig};

fn init_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("TROPICAL_REFINE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("TROPICAL_REFINE_THREADS={raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("thread pool")?;
    Ok(())
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    if let Err(e) = init_threads() {
        return fail(&CliError::Config(format!("{e:#}")));
    }
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
