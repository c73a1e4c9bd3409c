use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integration diverged at tau = {tau}")]
    Diverged { tau: f64 },

    /// Phase-space mass reached the edge of the truncated velocity window.
    #[error("velocity domain overflow at tau = {tau}: edge mass {edge_mass:.3e}")]
    DomainOverflow { tau: f64, edge_mass: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
