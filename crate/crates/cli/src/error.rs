use ruinlab_core::{Error, InvalidParameter};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Infeasible(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    pub fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<InvalidParameter> for CliError {
    fn from(e: InvalidParameter) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) | Error::Arity { .. } => CliError::Validation(e.to_string()),
            Error::NoFeasibleRetention { .. } => CliError::Infeasible(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
