//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The input is valid but needs a feature this build does not provide.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A computation would exceed its configured work budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A degree-stabilization check failed.
    #[error("series did not stabilize: {0}")]
    NonStabilization(String),
    /// An internal consistency check failed; this indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
    /// Malformed serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
