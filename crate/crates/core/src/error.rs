use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Shape mismatch, mixed scalar domains, invalid modulus.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A brute-force search would exceed the configured budget.
    #[error("resource limit: {0}")]
    Resource(String),
    /// A constructive step that a theorem guarantees to succeed did not.
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
