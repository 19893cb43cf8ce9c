use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An operation was applied outside its domain (non-unitary input, out-of-range offset, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A request exceeds what exhaustive search can handle.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed text input; `position` is a byte offset into the input.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}
