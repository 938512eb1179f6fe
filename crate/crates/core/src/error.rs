use thiserror::Error;

/// Errors raised across the crate.
///
/// Hypothesis failures carry the theorem or lemma whose assumption was not
/// met, so callers (and the CLI) can surface it verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("index sigma is undefined for p = {p} (requires p > 1)")]
    UndefinedIndex { p: f64 },

    #[error("{theorem}: hypothesis violated: {detail}")]
    Regime { theorem: String, detail: String },

    #[error("{theorem}: no positive solution exists: {detail}")]
    Nonexistence { theorem: String, detail: String },

    #[error("divergent integral ({reference}): {detail}")]
    Divergence { reference: String, detail: String },

    #[error("ledger infeasible: violated {}", .0.join(", "))]
    Infeasible(Vec<String>),

    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn regime(theorem: &str, detail: impl Into<String>) -> Self {
        Error::Regime {
            theorem: theorem.to_string(),
            detail: detail.into(),
        }
    }

    pub(crate) fn domain(detail: impl Into<String>) -> Self {
        Error::Domain(detail.into())
    }

    pub(crate) fn argument(detail: impl Into<String>) -> Self {
        Error::Argument(detail.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
