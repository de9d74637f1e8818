use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truth table length {0} is not a power of two of at least 2")]
    TruthTableLength(usize),
    #[error("arity {arity} exceeds the supported maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("invalid truth table character {ch:?} at position {position}")]
    TruthTableChar { ch: char, position: usize },
    #[error("variable x{index} is outside a space of {width} variables")]
    VariableOutOfRange { index: usize, width: usize },
    #[error("assignment of length {len} does not cover variable x{index}")]
    MissingAssignment { index: usize, len: usize },
    #[error("operands live in different variable spaces")]
    SpaceMismatch,
    #[error("variable x{0} has no binding")]
    UnboundVariable(usize),
    #[error("variable renaming is not injective: x{0} is hit twice")]
    NonInjectiveRename(usize),
    #[error("result would exceed the ceiling of {limit} terms")]
    TermLimit { limit: usize },
    #[error("duplicate segment name {0:?}")]
    DuplicateSegment(String),
    #[error("segment {0:?} is empty")]
    EmptySegment(String),
    #[error("no segment named {0:?}")]
    UnknownSegment(String),
    #[error("segment {name:?} has {actual} variables, expected {expected}")]
    SegmentWidth {
        name: String,
        expected: usize,
        actual: usize,
    },
    #[error("key expansion word index {0} is outside 0..=43")]
    WordIndex(usize),
    #[error("round index {0} is outside the AES-128 schedule")]
    RoundIndex(usize),
    #[error("invalid block {0:?}: expected 32 lowercase hex characters")]
    Hex(String),
    #[error("stage {stage} is malformed: {message}")]
    Stage { stage: String, message: String },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
