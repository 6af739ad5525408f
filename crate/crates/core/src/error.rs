use thiserror::Error;

/// Error taxonomy shared by every module. The CLI maps these onto exit codes:
/// usage/domain -> 2, resource -> 3, verification -> 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: mixed-group operands, bad syntax, invalid flags.
    #[error("usage error: {0}")]
    Usage(String),

    /// Arguments outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured work cap would be exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    /// A statement the library guarantees failed at runtime; always a bug
    /// in this crate or a genuine counterexample worth keeping.
    #[error("verification failure: {0}")]
    Verification(String),

    /// Invalid construction of a compound value (hypergraph edges out of
    /// bounds, delta-table base layer incomplete, ...).
    #[error("construction error: {0}")]
    Construction(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
}
