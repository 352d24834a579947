use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The tensor, duality or labels do not have the shape implied by the rank.
    #[error("malformed ring: {0}")]
    Shape(String),

    #[error("basis index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    /// The ring is well formed but fails the named axiom checks.
    #[error("ring fails {}", .0.join(", "))]
    Invalid(Vec<String>),

    #[error("bad ring document: {0}")]
    Document(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownBuiltin(String),

    #[error("not a group table: {0}")]
    NotAGroup(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
