use thiserror::Error;

/// Errors raised by the order, dilator, term and tree operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a partial order: {0}")]
    NotPartialOrder(String),

    #[error("element {index} out of range for a poset of size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("resource bound exceeded: {what} needs {needed}, bound is {bound}")]
    Resource { what: String, needed: usize, bound: usize },

    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("map is not a quasi-embedding")]
    NotQuasiEmbedding,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn resource(what: impl Into<String>, needed: usize, bound: usize) -> Self {
        Error::Resource {
            what: what.into(),
            needed,
            bound,
        }
    }
}
