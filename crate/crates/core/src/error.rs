use thiserror::Error;

/// Failure modes shared by all modules.
///
/// Blow-up is not represented here: overflow near the singular time is an
/// expected event and travels through ordinary return values. `Error` covers
/// genuine misuse (invalid configuration, violated preconditions, empty
/// windows) and internal-consistency checks whose failure points at a
/// discretization bug rather than at the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
