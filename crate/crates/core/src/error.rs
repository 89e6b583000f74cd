use thiserror::Error;

/// Errors raised by the optimizer and its building blocks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition (length mismatch, bad index, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An objective evaluation produced an unusable value.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// A run or experiment configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The requested feature is not available for this input.
    #[error("not implemented: {0}")]
    NotImplemented(String),

    /// An operation needs a non-empty input.
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_same_len(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Contract(format!(
            "{what}: length mismatch ({a} vs {b})"
        )));
    }
    Ok(())
}
