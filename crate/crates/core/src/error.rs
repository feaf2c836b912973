use thiserror::Error;

use crate::splitting::Violation;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("parameter region: {0}")]
    ParameterRegion(String),

    #[error("infeasible parameters:\n{}", format_violations(.0))]
    InfeasibleParameters(Vec<Violation>),

    #[error("invalid operator or problem: {0}")]
    Construction(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("iterate became non-finite at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("sampling failed: {0}")]
    Sampling(String),

    #[error("unsupported query: {0}")]
    Unsupported(String),

    #[error("singular linear system")]
    Singular,
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
