use std::fmt;
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use crate::config::ConfigError;

/// Failure classes, each with its own process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

impl ErrorKind {
    pub fn exit_status(self) -> u8 {
        match self {
            ErrorKind::Validation => 1,
            ErrorKind::Numerical => 2,
            ErrorKind::Io => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Validation, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Io, message: msg.into() }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.kind.exit_status())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<carlo::Error> for CliError {
    fn from(e: carlo::Error) -> Self {
        let kind = match e {
            carlo::Error::Domain(_) => ErrorKind::Validation,
            _ => ErrorKind::Numerical,
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::validation(e.to_string().trim_end())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
