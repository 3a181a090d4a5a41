//! Front end for `metaplectic-core`: scenario files, reports and the built-in casebook.

pub mod casebook;
pub mod commands;
pub mod report;
pub mod scenario;

use metaplectic_core::Error;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for a well-formed request outside the supported domain, or a failed check.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status for malformed, incomplete or unreadable input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("IoError: {0}")]
    Io(String),
    #[error("UsageError: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => EXIT_DOMAIN,
            _ => EXIT_INPUT,
        }
    }
}
