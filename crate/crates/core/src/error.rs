use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("sampling exhausted after {attempts} attempts: {reason}")]
    Exhausted { attempts: usize, reason: String },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("duality not preserved by the group element")]
    NotInGroup,
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
