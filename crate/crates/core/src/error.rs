use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the region where the state is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or a truncated state vector did not reach the requested tail bound.
    #[error("truncation failure after {terms} terms: remaining tail mass {tail:e} exceeds {tolerance:e}{hint}")]
    Truncation {
        terms: u64,
        tail: f64,
        tolerance: f64,
        hint: &'static str,
    },

    /// The two-mode superposition is the zero vector (zero amplitude and φ = π).
    #[error("degenerate state: superposition vanishes identically (zero amplitude with relative phase π)")]
    DegenerateState,

    /// Two evaluation routes that must agree did not.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
