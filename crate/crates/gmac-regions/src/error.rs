use std::fmt;

use gmac_core::discrete::DiscreteError;
use gmac_core::gaussian::ModelError;
use gmac_core::sweep::SweepError;
use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("model error: {0}")]
    Model(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Model(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub fn model(context: impl fmt::Display, e: impl fmt::Display) -> Self {
        CliError::Model(format!("{context}: {e}"))
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<DiscreteError> for CliError {
    fn from(e: DiscreteError) -> Self {
        CliError::Model(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
