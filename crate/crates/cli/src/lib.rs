//! File formats, reports, and command implementations behind the `eqdec`
//! binary. Kept as a library so the parsing and report plumbing is unit
//! testable and reusable from integration tests.

pub mod commands;
pub mod formats;
pub mod report;

use std::fmt;

/// Errors that map to process exit codes: usage problems exit 2 (mostly
/// handled by the argument parser), file/model problems exit 3. Check
/// failures are not errors; they live in the report and exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    File(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::File(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File(_) => 3,
        }
    }
}
