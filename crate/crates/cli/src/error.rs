use std::process::ExitCode;

use pauli_core::PauliError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Validation(String),

    #[error("numerical divergence: {0}")]
    Divergence(PauliError),

    #[error("{0}")]
    Numerical(PauliError),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub(crate) fn config(e: PauliError) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Divergence(_) => 4,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }

    pub fn to_exit_code(&self) -> ExitCode {
        ExitCode::from(self.exit_code())
    }
}

impl From<PauliError> for CliError {
    fn from(e: PauliError) -> Self {
        match e {
            PauliError::Divergence { .. } => CliError::Divergence(e),
            PauliError::InvalidArgument(_) | PauliError::DimensionGuard { .. } => {
                CliError::Config(e.to_string())
            }
            PauliError::Sink(msg) => CliError::Io(std::io::Error::other(msg)),
            other => CliError::Numerical(other),
        }
    }
}
