/// Errors surfaced by the verifier. All of them map to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Kernel(#[from] supcone::Error),
}

pub type VerifyResult<T> = std::result::Result<T, VerifyError>;
