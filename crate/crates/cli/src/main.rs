use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pauli_cli::commands::{DEFAULT_CONVERGE_DTS, DEFAULT_ORACLE_DTS, DEFAULT_REFERENCE_DT};
use pauli_cli::{cmd_converge, cmd_oracle, cmd_run, cmd_validate, init_threads, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "pauli", version, about = "Time-splitting solver for the scaled Pauli equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured state; writes series.csv and VTK snapshots.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Self-convergence against a finer reference step; writes converge.csv.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "dt", num_args = 1..)]
        dt: Vec<f64>,
        #[arg(long = "dt-ref")]
        dt_ref: Option<f64>,
    },
    /// Error against the dense exact solution; writes oracle.csv.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "dt", num_args = 1..)]
        dt: Vec<f64>,
    },
    /// Check gauge, norm identities and decoupling on a few steps.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn or_default(v: Vec<f64>, default: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        default.to_vec()
    } else {
        v
    }
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    init_threads()?;
    match cli.command {
        Command::Run { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = cmd_run(&cfg)?;
            println!(
                "{} steps; series in {}; {} snapshots",
                report.steps,
                report.series.display(),
                report.snapshots.len()
            );
        }
        Command::Converge { config, dt, dt_ref } => {
            let cfg = RunConfig::load(&config)?;
            let dts = or_default(dt, &DEFAULT_CONVERGE_DTS);
            let table = cmd_converge(&cfg, &dts, dt_ref.unwrap_or(DEFAULT_REFERENCE_DT))?;
            print!("{}", table.render());
        }
        Command::Oracle { config, dt } => {
            let cfg = RunConfig::load(&config)?;
            let table = cmd_oracle(&cfg, &or_default(dt, &DEFAULT_ORACLE_DTS))?;
            print!("{}", table.render());
        }
        Command::Validate { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = cmd_validate(&cfg)?;
            print!("{report}");
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            e.to_exit_code()
        }
    }
}
