use thiserror::Error;

/// Errors reported by the structures in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("balance violation: {0}")]
    Unbalanced(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("no parent")]
    NoParent,
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

#[inline]
pub(crate) fn check_index(index: usize, len: usize) -> Result<()> {
    if index < len {
        Ok(())
    } else {
        Err(Error::OutOfRange { index, len })
    }
}

#[inline]
pub(crate) fn check_range(i: usize, j: usize, len: usize) -> Result<()> {
    check_index(j, len)?;
    if i > j {
        return Err(Error::InvalidArgument(format!("empty range [{i}, {j}]")));
    }
    Ok(())
}
