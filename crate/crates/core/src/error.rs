use thiserror::Error;

/// Errors produced by the expansion, word and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcfError {
    /// Input lies outside the domain of the map or operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A value that cannot be represented in canonical exact form.
    #[error("representation error: {0}")]
    Representation(String),
    /// Malformed or inconsistent arguments.
    #[error("argument error: {0}")]
    Argument(String),
    /// A finite digit source ran out before the requested word length was reached.
    #[error("insufficient digits: {0}")]
    InsufficientDigits(String),
    /// Factor statistics did not stabilize between a prefix and its double.
    #[error("prefix too short: {0}")]
    PrefixTooShort(String),
    /// Numerical routine failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Text input (digit-source DSL, word files) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = NcfError> = std::result::Result<T, E>;
