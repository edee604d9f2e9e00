use std::process::ExitCode;

use clap::Parser;
use pauli_lab::{exit_code, resolve, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pauli-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let cfg = resolve(cli)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))?;
    }
    let outcome = run(cli.command, &cfg)?;
    print!("{}", outcome.summary);
    if !outcome.summary.ends_with('\n') {
        println!();
    }
    for f in &outcome.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(exit_code(&outcome))
}
