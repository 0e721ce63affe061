use thiserror::Error;

/// Errors produced by backend validation and by the calculus operations.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("composition mismatch: cod of first factor differs from dom of second")]
    ComposeMismatch,
    #[error("expected a monomorphism: {0}")]
    NotMono(String),
    #[error("expected an epimorphism: {0}")]
    NotEpi(String),
    #[error("no image factorization: EM comparison is not monic")]
    NoImage,
    #[error("antinormal composite {which} is not a normal map")]
    NotNormal { which: String },
    #[error("vertical map {which} is not a normal map")]
    NonNormalVertical { which: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("resource bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported operation for this backend: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
