use std::process::ExitCode;

use clap::Parser;

use logmaj_cli::args::Cli;
use logmaj_cli::commands::{execute, write};
use logmaj_cli::{CliError, RunConfig};

fn threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("LOGMAJ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LOGMAJ_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    threads()?;
    let mut cfg = RunConfig::with_seed(cli.global.seed);
    for t in &cli.global.tol {
        cfg.tol.set(t)?;
    }
    let outcome = execute(cli.command, &cfg, cli.global.format)?;
    match &cli.global.out {
        Some(path) => write(path, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("logmaj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
