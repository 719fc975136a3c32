//! Command implementations behind the `limbadd` binary.

pub mod args;
pub mod commands;
pub mod io;

use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations.
    #[error("{0}")]
    Usage(String),
    /// Operand text that is not a decimal integer, or unreadable input.
    #[error("{0}")]
    Input(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
    /// Adders disagreed during verification.
    #[error("verification failed")]
    Mismatch,
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Mismatch => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }

    pub(crate) fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
