use serde::{Deserialize, Serialize};

use crate::hilbert::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    ParameterError,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::MaxIter => "max_iter",
            Self::ParameterError => "parameter_error",
        }
    }
}

/// Per-iteration record of a solve. Entry `i` of each series belongs to
/// the iterate produced by step `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveTrace<S> {
    pub residuals: Vec<S>,
    pub iterate_norms: Vec<S>,
    /// Anchor weight used by each step (`λ_k`, or `α_k` for the viscosity
    /// baseline; zero for methods without one).
    pub lambdas: Vec<S>,
    pub final_point: Vector<S>,
    pub iterations: usize,
    pub status: Status,
}

impl<S: Copy> SolveTrace<S> {
    pub fn last_residual(&self) -> Option<S> {
        self.residuals.last().copied()
    }
}
