use std::path::PathBuf;
use std::process::ExitCode;

use adiabat_core::Error as CoreError;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Verification(String),
    #[error("{0}")]
    Failed(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Degenerate(_) => 4,
            CliError::Verification(_) => 5,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Failed(_) => "integration_failed",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Degenerate(_) => "degenerate_input",
            CliError::Verification(_) => "verification_failed",
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": { "code": self.code(), "message": self.to_string() } }).to_string()
    }

    /// Reports the error on the channel matching the output mode.
    pub fn report(&self, json: bool) -> ExitCode {
        if json {
            println!("{}", self.to_json());
        } else {
            eprintln!("adiabat: {self}");
        }
        ExitCode::from(self.exit_code())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DegenerateGeometry => CliError::Degenerate(e.to_string()),
            CoreError::Domain { .. }
            | CoreError::GridTooShort { .. }
            | CoreError::GridNotIncreasing { .. }
            | CoreError::GridTooCoarse { .. }
            | CoreError::PhaseUnresolved { .. }
            | CoreError::OutOfRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
