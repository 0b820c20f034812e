use crate::scalar::Backend;

/// Errors raised by the lattice kernel.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} atoms vs {right} atoms")]
    Dimension { left: usize, right: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("operation requires the {needed} backend")]
    Backend { needed: Backend },
    #[error("size {size} exceeds the limit {limit}")]
    Size { size: usize, limit: usize },
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::Dimension { left, right })
    }
}
