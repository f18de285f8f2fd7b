use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} catalytic variables")]
    ArityMismatch { left: usize, right: usize },

    #[error("catalytic variable {0} is not present in this series")]
    MissingVariable(usize),

    #[error("coefficient t^{index} requested but the series is only valid to order {order}")]
    BeyondTruncation { index: usize, order: usize },

    #[error("invalid step set: {0}")]
    InvalidStepSet(String),

    #[error("operation needs a {expected}-dimensional step set, got dimension {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("resource bound exceeded: {0}")]
    ResourceExceeded(String),

    #[error("insufficient terms: have {have}, need at least {need} for the requested bounds")]
    InsufficientTerms { have: usize, need: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("unrolling needs a supplied value at exceptional index {0}")]
    MissingExceptionalValue(usize),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("unknown example id `{0}`")]
    UnknownExample(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
