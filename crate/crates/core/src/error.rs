use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: usize, right: usize },
    #[error("kind mismatch: cannot combine a vector with a covector")]
    KindMismatch,
    #[error("simplex {simplex} has a tangent outside the admissible (horizontal, primitive) cone")]
    Admissibility { simplex: usize },
    #[error("degenerate level t = {level}: it coincides with a vertex value of f; perturb the level")]
    DegenerateLevel { level: String },
    #[error("scope error: {0}")]
    Scope(String),
    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown identifier `{name}` at {line}:{column}")]
    UnknownIdentifier { name: String, line: usize, column: usize },
    #[error("not a rational literal: `{0}`")]
    NonRational(String),
    #[error("chain file: {0}")]
    ChainFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
