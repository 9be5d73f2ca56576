mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "nlsmode", version, about = "Solitary waves, internal modes and Fermi golden rule constants for the perturbed cubic NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Where to write the CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// `power` (g = a s^sigma) or `zero`.
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Half length L of the symmetric grid [-L, L].
    #[arg(long)]
    pub half_length: Option<f64>,
    /// Number of intervals on each side of the origin.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Profile Q on the grid (CSV y,Q,Qp,Qpp).
    Profile {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Internal mode, transformed potentials and the oracle eigenvalue.
    Mode {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Fermi golden rule constants.
    Fgr {
        #[command(subcommand)]
        command: FgrCommand,
    },
    /// Split-step evolution of a perturbed soliton.
    Simulate(commands::SimulateArgs),
    /// Run the acceptance checks.
    Validate {
        level: Level,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum FgrCommand {
    /// Γ₀(σ) with an error estimate.
    Gamma0 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        sigma: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Γ₀ on a uniform σ-grid (CSV sigma,gamma0,err).
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Γ(ω) for a general nonlinearity.
    General {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        omega: Option<f64>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Profile { common, model, grid, omega } => commands::profile(&common, &model, &grid, omega),
        Command::Mode { common, model, grid, omega } => commands::mode(&common, &model, &grid, omega),
        Command::Fgr { command } => match command {
            FgrCommand::Gamma0 { common, sigma, grid } => commands::gamma0(&common, sigma, &grid),
            FgrCommand::Scan { common, from, to, points, grid, jobs } => {
                commands::scan(&common, from, to, points, &grid, jobs)
            }
            FgrCommand::General { common, model, grid, omega } => commands::general(&common, &model, &grid, omega),
        },
        Command::Simulate(args) => commands::simulate(&args),
        Command::Validate { level, common, grid, jobs } => commands::validate(level, &common, &grid, jobs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
