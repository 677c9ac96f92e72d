use thiserror::Error;

/// Errors raised when an input is structurally malformed or an operation's
/// precondition does not hold. Axiom violations of otherwise well-formed
/// inputs are reported through [`crate::ValidationReport`] instead.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),

    #[error("duplicate entry `{0}`")]
    Duplicate(String),

    #[error("unknown sort `{0}`")]
    UnknownSort(String),

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown relation symbol `{0}`")]
    UnknownRelation(String),

    #[error("unknown access level `{0}`")]
    UnknownLevel(String),

    #[error("sort mismatch: {0}")]
    SortMismatch(String),

    #[error("not a configuration: {0}")]
    NotConfiguration(String),

    #[error("variable `{0}` has events in a configuration that are not totally ordered")]
    NotTotallyOrdered(String),

    #[error("sort `{0}` is used by a variable but has no elements")]
    EmptySort(String),

    #[error("middle games do not match: {0}")]
    MiddleGameMismatch(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
