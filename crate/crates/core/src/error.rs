use thiserror::Error;

use crate::progression::Coloring;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive enumeration was refused because it would exceed its budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The threshold search ran out of nodes (or hit its length cap) before it
    /// could prove exhaustion. `best` is the longest valid coloring seen.
    #[error("search budget exceeded after {nodes} nodes; best lower bound {}", .best.n_points() + 1)]
    SearchBudgetExceeded { nodes: u64, best: Coloring },

    #[error(
        "power iteration did not converge in {iterations} iterations (best residual {residual:e})"
    )]
    Convergence { iterations: usize, residual: f64 },

    /// A numeric self-check failed.
    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
