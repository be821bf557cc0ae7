use std::process::ExitCode;

use thiserror::Error;

/// Failures of a command. Failed checks are not errors; they come back as a report with
/// `pass == false`.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("invalid product JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Input(bloch_core::Error),
    #[error(transparent)]
    Math(#[from] bloch_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Math(_) | CliError::Write { .. } | CliError::Csv(_) => {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
            _ => ExitCode::from(EXIT_USAGE),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
