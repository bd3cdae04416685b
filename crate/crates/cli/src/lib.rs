//! Command-line front end: flag/config handling, method dispatch, and
//! machine-readable CSV/JSON output for the switched-channel capacity
//! library.

pub mod args;
pub mod commands;
pub mod eval;
pub mod output;
pub mod settings;

/// Process exit codes.
pub mod exit {
    /// Success.
    pub const OK: u8 = 0;
    /// Malformed flags, config, or flag combinations.
    pub const USAGE: u8 = 1;
    /// Channel parameters or method settings are invalid.
    pub const INVALID_PARAMS: u8 = 2;
    /// An estimate did not converge and `--strict` was set.
    pub const NON_CONVERGED: u8 = 3;
    /// Cross-method comparison failed the sandwich check.
    pub const INCONSISTENT: u8 = 4;
}

/// A command failure carrying its exit code; the message goes to stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: exit::INVALID_PARAMS,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}
