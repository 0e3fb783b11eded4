//! Shared error type.

use thiserror::Error;

/// Errors surfaced by the series engine, graph layer, and samplers.
#[derive(Debug, Error)]
pub enum CpgError {
    /// A series operation received incompatible operands (e.g. division by a
    /// series with zero constant term, or sqrt of a series whose constant
    /// term has no representable square root).
    #[error("series error: {0}")]
    Series(String),

    /// An iterative solver failed to meet its residual target.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    /// A graph or network failed a structural precondition.
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// A sampler exhausted its rejection budget.
    #[error("rejection budget exceeded: {0}")]
    RejectionBudget(String),

    /// A request fell outside a supported parameter range.
    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Malformed input from a file or the CLI.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CpgError>;
