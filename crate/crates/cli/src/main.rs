//! `hecke-kms`: command-line access to the Hecke pair laboratory.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "hecke-kms", version, about = "Hecke operators, partition functions and KMS measures for (GL2(Q)+, SL2(Z))")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Print exact rationals as num/den.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// RNG seed; HECKE_KMS_SEED replaces the default of 0.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Double cosets and their right coset decompositions.
    #[command(subcommand)]
    Cosets(commands::CosetsCmd),
    /// Hecke algebra arithmetic.
    #[command(subcommand)]
    Hecke(commands::HeckeCmd),
    /// Partition functions.
    #[command(subcommand)]
    Zeta(commands::ZetaCmd),
    /// Local KMS measures and the phase transition.
    #[command(subcommand)]
    Measure(commands::MeasureCmd),
    /// Singular strata.
    #[command(subcommand)]
    Singular(commands::SingularCmd),
    /// Invariant projection.
    #[command(subcommand)]
    Project(commands::ProjectCmd),
    /// Character damping product.
    Damping(commands::DampingArgs),
    /// Equidistribution of Hecke points.
    #[command(subcommand)]
    Equidist(commands::EquidistCmd),
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters: exit 2.
    Usage(String),
    /// A check or computation failed: exit 1.
    Internal(String),
}

impl From<hecke_core::HeckeError> for CliError {
    fn from(e: hecke_core::HeckeError) -> Self {
        use hecke_core::HeckeError::*;
        match e {
            Parameter(_) | Domain(_) | Parse(_) | Singular => CliError::Usage(e.to_string()),
            Overflow(_) => CliError::Internal(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn seed(cli: &Cli) -> CliResult<u64> {
    if let Some(s) = cli.seed {
        return Ok(s);
    }
    match std::env::var("HECKE_KMS_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("HECKE_KMS_SEED is not an integer: {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let ctx = commands::Ctx {
        exact: cli.exact,
        seed: seed(cli)?,
    };
    let (out, verdict) = commands::dispatch(&cli.command, &ctx)?;
    output::emit(&out, cli.format, cli.output.as_deref())?;
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {}", m.replace('\n', " "));
            ExitCode::from(2)
        }
        Err(CliError::Internal(m)) => {
            eprintln!("error: {}", m.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
