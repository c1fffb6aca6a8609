use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension vector: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("operator is zero")]
    ZeroOperator,

    #[error("birank is defined for bipartite systems only, got {0} parties")]
    NotBipartite(usize),

    #[error("d^2 = {needed} exceeds the resource cap {cap} (pass --force or raise SEPLEN_CAP)")]
    ResourceCap { needed: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("structural check failed: {0}")]
    Structure(String),

    #[error("could not draw generic parameters after {0} attempts")]
    NonGeneric(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
