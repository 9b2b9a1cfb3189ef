//! Error channel for the binary. Configuration problems (unreadable or
//! invalid input, impossible parameter combinations) exit with code 2;
//! failures while computing or writing results exit with code 3.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// The run was misconfigured: bad file, bad JSON, bad parameters.
    Config(String),
    /// The configuration was well-formed but the computation or the
    /// output stage failed.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError::Numerical(message.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(message) => write!(f, "configuration error: {message}"),
            CliError::Numerical(message) => write!(f, "computation error: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<relkin::ObserverError> for CliError {
    fn from(error: relkin::ObserverError) -> Self {
        CliError::Numerical(error.to_string())
    }
}

impl From<relkin::GyroscopeError> for CliError {
    fn from(error: relkin::GyroscopeError) -> Self {
        CliError::Numerical(error.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(error: serde_json::Error) -> Self {
        CliError::Config(format!("invalid JSON: {error}"))
    }
}
