//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// `NeedsExtension` is not a defect: it reports that an exact answer exists
/// only over a field extension (an irrational square root, a quadratic
/// non-residue, or an anisotropic conic over the rationals). Callers that can
/// live with a partial answer should match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The requested construction requires a square root or isotropic vector
    /// that does not exist in the active field.
    #[error("needs a field extension: {0}")]
    NeedsExtension(String),

    /// A precondition of the operation was violated by the input.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A seeded search ran out of its trial budget without finding a witness.
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid configuration (bad prime, zero trials, unknown suite).
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub fn needs_extension(msg: impl Into<String>) -> Self {
        Error::NeedsExtension(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
