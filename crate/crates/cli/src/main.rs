//! Command-line front end: runs spectra, steady-state, normal-mode,
//! evolution, momentum-space, and skin-scan computations from a JSON
//! configuration and writes CSV or JSON tables.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lindblad_skin_cli::config::{RunConfig, Task};
use lindblad_skin_cli::tasks::{self, TaskError};

#[derive(Parser)]
#[command(
    name = "lindblad-skin",
    about = "Steady states, normal modes, and chiral damping of dissipative free-fermion chains",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block eigenvalues (periodic) or rapidities (open)
    Spectrum(CommonArgs),
    /// Steady-state site occupations
    Ness(CommonArgs),
    /// Per-mode occupation difference profiles
    Modes(CommonArgs),
    /// Occupation dynamics and the pair-amplitude report
    Evolve(CommonArgs),
    /// Per-wavenumber occupation dynamics (periodic chains)
    Kspace(CommonArgs),
    /// Skin-effect absence predicate over a coupling-angle grid
    SkinScan(CommonArgs),
    /// Brute-force cross-validation at reduced size
    OracleCheck(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Override the output directory from the configuration
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn task(&self) -> Task {
        match self {
            Command::Spectrum(_) => Task::Spectrum,
            Command::Ness(_) => Task::Ness,
            Command::Modes(_) => Task::Modes,
            Command::Evolve(_) => Task::Evolve,
            Command::Kspace(_) => Task::Kspace,
            Command::SkinScan(_) => Task::SkinScan,
            Command::OracleCheck(_) => Task::OracleCheck,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::Ness(a)
            | Command::Modes(a)
            | Command::Evolve(a)
            | Command::Kspace(a)
            | Command::SkinScan(a)
            | Command::OracleCheck(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(TaskError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(TaskError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, TaskError> {
    let args = cli.command.args();
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| TaskError::Config(format!("{}: {e}", args.config.display())))?;
    let config: RunConfig = serde_json::from_str(&text)
        .map_err(|e| TaskError::Config(format!("{}: {e}", args.config.display())))?;
    if config.task != cli.command.task() {
        return Err(TaskError::Config(format!(
            "configuration task '{}' does not match subcommand '{}'",
            config.task.name(),
            cli.command.task().name()
        )));
    }
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&config.output.dir));
    tasks::run(&config, &out_dir)
}
