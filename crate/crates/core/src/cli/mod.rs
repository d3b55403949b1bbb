//! Command-line front end.

pub mod commands;
pub mod config;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use config::{ConfigError, ModelArgs};

/// Discord dynamics of two qubits dephasing in a common Ohmic bath.
#[derive(Debug, Parser)]
#[command(name = "discord-dynamics", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of decay factors, correlations and discord.
    Evolve(EvolveArgs),
    /// Critic time over a grid of coupling strength and c3/c1.
    CriticSurface(SurfaceArgs),
    /// Amplification rate D(inf)/D(0) for identical qubits with c2 = 0, c3 = c1/2.
    Amplification(AmplificationArgs),
    /// Critic time of a single configuration.
    CriticTime(CriticTimeArgs),
    /// Correlations at a single time, optionally checked by measurement search.
    Discord(DiscordArgs),
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceMethod {
    ClosedForm,
    RootFind,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.1)]
    pub eta_omega2_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub eta_omega2_max: f64,
    #[arg(long, default_value_t = 100)]
    pub eta_omega2_points: usize,
    #[arg(long, default_value_t = 0.5)]
    pub ratio_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub ratio_max: f64,
    #[arg(long, default_value_t = 100)]
    pub ratio_points: usize,
    #[arg(long, value_enum, default_value_t = SurfaceMethod::ClosedForm)]
    pub method: SurfaceMethod,
}

#[derive(Debug, Clone, Args)]
pub struct AmplificationArgs {
    /// spacing of the c1 grid
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    #[arg(long, short, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CriticTimeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DiscordArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// evaluation time in units of 1/omega_c
    #[arg(long, default_value_t = 0.0)]
    pub time: f64,
    /// also minimize over projective measurements
    #[arg(long)]
    pub bruteforce: bool,
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Numeric(Error),
    Domain(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Domain(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::Numeric(e) => write!(f, "numerical failure: {e}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Quadrature { .. } | Error::RootFind(_) | Error::Refinement { .. } => CliError::Numeric(e),
            _ => CliError::Domain(e),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Runs a parsed command and writes its CSV.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (text, output) = match &cli.command {
        Command::Evolve(args) => {
            let cfg = config::parse_config(&args.model)?;
            (commands::evolve(&cfg)?, cfg.output)
        }
        Command::CriticSurface(args) => {
            let cfg = config::parse_config(&args.model)?;
            (commands::critic_surface(&cfg, args)?, cfg.output)
        }
        Command::Amplification(args) => (commands::amplification(args.step)?, args.output.clone()),
        Command::CriticTime(args) => {
            let cfg = config::parse_config(&args.model)?;
            (commands::critic_time(&cfg)?, cfg.output)
        }
        Command::Discord(args) => {
            let cfg = config::parse_config(&args.model)?;
            (commands::discord(&cfg, args.time, args.bruteforce)?, cfg.output)
        }
    };
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
