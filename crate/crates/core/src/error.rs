use thiserror::Error;

/// Errors raised by the library. Verdicts (closed / not closed, feasible /
/// infeasible, ...) are never reported through this type; only malformed
/// input, violated preconditions and exhausted search budgets are.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid rational `{0}`")]
    InvalidRational(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget of {limit} steps exhausted during {what}")]
    BudgetExceeded { what: String, limit: u64 },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
