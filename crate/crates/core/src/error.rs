use thiserror::Error;

/// Errors raised by the library.
///
/// Out-of-domain *bound* requests are not errors; they come back as
/// not-applicable [`crate::bound::BoundValue`]s so tables render cleanly.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} needs {needed} items, over the cap of {cap}")]
    Resource { what: String, needed: u128, cap: u128 },

    #[error("time budget exhausted: {0}")]
    Timeout(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
