//! Command-line front end: config resolution, subcommand dispatch and report
//! writing.

pub mod commands;
pub mod config;
pub mod error;
pub mod landau;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use commands::Outcome;
pub use config::RunConfig;
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Lowest eigenpairs of an assembled operator.
    Spectrum,
    /// Convergence of the conjugation and Dirac-square identities.
    Identity,
    /// Sampled doubling check of Δφ dλ.
    Doubling,
    /// Radial Levi-matrix conditions and the resulting classification.
    Criteria,
    /// Finite-volume compactness proxy over a sweep of box sizes.
    Proxy,
    /// Built-in checks on the constant-field weight |z1|^2.
    Landau,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Identity => "identity",
            Command::Doubling => "doubling",
            Command::Criteria => "criteria",
            Command::Proxy => "proxy",
            Command::Landau => "landau",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "pauli-lab", version, about = "Spectral laboratory for Pauli and Dirac operators")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML config; every key has a default.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Weight expression, overrides `weight`.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Output directory, overrides `output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads, overrides `threads`.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Matrix Market export of the operator (`spectrum` only).
    #[arg(long)]
    pub dump_operator: Option<PathBuf>,
}

/// Defaults, then the config file, then flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(w) = &cli.weight {
        cfg.weight = w.clone();
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    if let Some(t) = cli.threads {
        cfg.threads = Some(t);
    }
    if let Some(d) = &cli.dump_operator {
        if cli.command != Command::Spectrum {
            return Err(CliError::Config("--dump-operator applies to `spectrum` only".into()));
        }
        cfg.spectrum.dump_operator = Some(d.clone());
    }
    if cfg.threads == Some(0) {
        return Err(CliError::Config("threads must be at least 1".into()));
    }
    Ok(cfg)
}

/// Writes the resolved config as `<command>.resolved.toml`, then runs.
pub fn run(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let out = &cfg.output_dir;
    std::fs::create_dir_all(out)?;
    let echo = out.join(format!("{}.resolved.toml", command.name()));
    std::fs::write(&echo, cfg.to_toml())?;
    let mut outcome = match command {
        Command::Spectrum => commands::spectrum(cfg, out),
        Command::Identity => commands::identity(cfg, out),
        Command::Doubling => commands::doubling(cfg, out),
        Command::Criteria => commands::criteria(cfg, out),
        Command::Proxy => commands::proxy(cfg, out),
        Command::Landau => landau::landau(cfg, out),
    }?;
    outcome.files.insert(0, echo);
    Ok(outcome)
}

/// 0 on success, 1 when `landau` checks fail, 3 when a result did not
/// converge.
pub fn exit_code(outcome: &Outcome) -> i32 {
    if outcome.unconverged {
        3
    } else if outcome.checks_failed {
        1
    } else {
        0
    }
}
