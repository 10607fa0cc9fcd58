use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid flags, configuration files, parameters or output paths.
    #[error("configuration error: {0}")]
    Config(String),
    /// A stepper or stability evaluation failed.
    #[error("numerical failure: {0}")]
    Numerical(#[from] patankar::Error),
}

impl CliError {
    pub fn config(e: impl std::fmt::Display) -> Self {
        Self::Config(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Numerical(_) => ExitCode::from(1),
            Self::Config(_) => ExitCode::from(2),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Config(format!("csv: {e}"))
    }
}
