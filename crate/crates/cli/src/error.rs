use std::io;
use std::path::Path;

use thiserror::Error;

/// Failures mapped onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Format(String),
    #[error("tests failed tolerance: {}", .0.join(", "))]
    Strict(Vec<String>),
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 1 usage or parameter error, 2 I/O or format error, 3 strict-mode
    /// tolerance failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Format(_) => 2,
            CliError::Strict(_) => 3,
        }
    }
}

impl From<qrng_core::Error> for CliError {
    fn from(e: qrng_core::Error) -> Self {
        use qrng_core::Error as E;
        match e {
            E::Io(_) => CliError::Io(e.to_string()),
            E::Format(_) => CliError::Format(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}
