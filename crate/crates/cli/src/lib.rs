//! Driver for the Pauli splitting solver: JSON configuration, the `run`,
//! `converge`, `oracle` and `validate` commands, and their file outputs.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{cmd_converge, cmd_oracle, cmd_run, cmd_validate};
pub use config::{GridConfig, RunConfig, Setup};
pub use error::CliError;

/// Caps the global rayon pool at `PAULI_THREADS` when that is set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PAULI_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("PAULI_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot size thread pool: {e}")))
}
