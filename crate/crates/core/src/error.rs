use thiserror::Error;

/// Errors surfaced by this crate, grouped by how a caller should react.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Structurally invalid inputs: size mismatches, malformed partitions,
    /// missing parameters.
    #[error("configuration error: {0}")]
    Config(String),
    /// Inputs outside an operation's (or a theorem's) hypothesis region.
    /// The message names the violated hypothesis.
    #[error("domain error: {0}")]
    Domain(String),
    /// Work refused because it exceeds a cap or budget.
    #[error("resource error: {0}")]
    Resource(String),
    /// A caller-side contract was violated (e.g. a dirty scratch register).
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
