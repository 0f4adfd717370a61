//! Error type of the command-line tool and its exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every check passed |
//! | 1 | an inequality check failed |
//! | 2 | usage, input or domain error |
//! | 3 | an internal theorem check was violated |

use std::path::Path;

use isowind::Error;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(Error),
    #[error("theorem violation: {0}")]
    Violation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation(_) => EXIT_VIOLATION,
            _ => EXIT_USAGE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoremViolation(msg) => CliError::Violation(msg),
            e => CliError::Domain(e),
        }
    }
}
