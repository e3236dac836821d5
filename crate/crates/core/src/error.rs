use thiserror::Error;

/// Errors raised by the finite-window operations.
///
/// A search that finds nothing inside its window is not an error; those
/// operations return `Ok(None)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {what} is {got}, limit is {limit}")]
    Capacity { what: String, got: u128, limit: u128 },

    #[error("window overflow: {what} needs a window of at least {needed}, have {window}")]
    Overflow { what: String, needed: u128, window: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("margin exhausted: {what}; short by {shortfall} positions")]
    Margin { what: String, shortfall: usize },

    #[error("incomplete certificate: missing links for {gaps:?}")]
    IncompleteCertificate { gaps: Vec<(usize, usize)> },

    #[error("not a homomorphism: {0}")]
    Homomorphism(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { path: path.into(), message: message.into() }
    }
}
