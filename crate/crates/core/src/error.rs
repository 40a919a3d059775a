use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient rank mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("subgroup containment violated")]
    NotContained,
    #[error("vector is not a cocycle in degree {0}")]
    NotCocycle(i32),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("filtrations live on different complexes")]
    BaseMismatch,
    #[error("invalid simplicial complex: {0}")]
    Simplicial(String),
    #[error("inconsistent sheaf: {0}")]
    Sheaf(String),
    #[error("invalid flag: {0}")]
    Flag(String),
    #[error("invalid simplicial map: {0}")]
    Map(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
