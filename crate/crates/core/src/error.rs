use thiserror::Error;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An enumeration or combinatorial budget would be exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The quantity diverges or is undefined at the requested point.
    #[error("singular point: {0}")]
    Singular(String),
    /// The measure is not invertible on the requested branch.
    #[error("branch error: {0}")]
    Branch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
