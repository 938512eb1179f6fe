use std::fmt;
use std::path::Path;

use gm_steady::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUSAL: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, unreadable or malformed input.
    Usage(String),
    /// A hypothesis of the requested construction does not hold.
    Refusal(String),
    /// The computation ran but did not meet its tolerance.
    NonConvergence(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Refusal(_) => EXIT_REFUSAL,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
        }
    }

    /// Prefixes the message with the file it came from.
    pub fn in_file(self, path: &Path) -> Self {
        let tag = |m: String| format!("{}: {m}", path.display());
        match self {
            CliError::Usage(m) => CliError::Usage(tag(m)),
            CliError::Refusal(m) => CliError::Refusal(tag(m)),
            CliError::NonConvergence(m) => CliError::NonConvergence(tag(m)),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Refusal(m) | CliError::NonConvergence(m) => f.write_str(m),
        }
    }
}

/// Exit code a library error maps to.
pub fn exit_code_of(err: &Error) -> i32 {
    match err {
        Error::Regime { .. } | Error::Nonexistence { .. } | Error::Infeasible(_) | Error::Divergence { .. } => {
            EXIT_REFUSAL
        }
        Error::Internal(_) => EXIT_NONCONVERGENCE,
        Error::Domain(_) | Error::Argument(_) | Error::UndefinedIndex { .. } | Error::Parse { .. } => EXIT_USAGE,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match exit_code_of(&err) {
            EXIT_REFUSAL => CliError::Refusal(msg),
            EXIT_NONCONVERGENCE => CliError::NonConvergence(msg),
            _ => CliError::Usage(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
