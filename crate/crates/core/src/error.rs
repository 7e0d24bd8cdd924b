use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The input violates one or more model invariants.
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    /// An exponential-time routine was asked to run beyond its configured limit.
    #[error("size guard `{guard}` exceeded: {actual} > {limit}")]
    SizeGuard {
        guard: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Recovery of a client was observed to be non-monotone in its own bid.
    #[error("non-monotone recovery for client {client}: {detail}")]
    NonMonotone { client: usize, detail: String },

    #[error("solver `{0}` is not exactly optimal over its matrix set")]
    NonOptimalSolver(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
