use std::fmt;
use std::process::ExitCode;

use cvnn_core::harness::HarnessError;
use cvnn_core::CostError;

/// Failure with its process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Invalid(String),
    /// Exit 3.
    NotApplicable(String),
    /// Exit 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Verification(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::NotApplicable(_) => 3,
            CliError::Io(_) => 4,
        })
    }

    pub fn io(path: &std::path::Path, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m)
            | CliError::Invalid(m)
            | CliError::NotApplicable(m)
            | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<CostError> for CliError {
    fn from(e: CostError) -> Self {
        match e {
            CostError::NotApplicable(_) => CliError::NotApplicable(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Cost(c) => c.into(),
            HarnessError::InvalidArgument(m) | HarnessError::Table(m) => CliError::Invalid(m),
            other => CliError::Verification(other.to_string()),
        }
    }
}
