use std::fmt;
use std::path::PathBuf;

use crate::auction::AuctionOutcome;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading a Matrix Market or edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader(String),
    MalformedSize(String),
    MalformedEntry(String),
    IndexOutOfBounds { row: usize, col: usize, rows: usize, cols: usize },
    NonFiniteValue(String),
    NegativeValue(String),
    DuplicateEntry { row: usize, col: usize },
    EntryCountMismatch { declared: usize, found: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader(s) => write!(f, "malformed header: {s}"),
            ParseErrorKind::MalformedSize(s) => write!(f, "malformed size line: {s}"),
            ParseErrorKind::MalformedEntry(s) => write!(f, "malformed entry: {s}"),
            ParseErrorKind::IndexOutOfBounds { row, col, rows, cols } => {
                write!(f, "index ({row}, {col}) outside declared {rows}x{cols} bounds")
            }
            ParseErrorKind::NonFiniteValue(s) => write!(f, "non-finite value `{s}`"),
            ParseErrorKind::NegativeValue(s) => write!(f, "negative weight `{s}`"),
            ParseErrorKind::DuplicateEntry { row, col } => {
                write!(f, "duplicate entry ({row}, {col})")
            }
            ParseErrorKind::EntryCountMismatch { declared, found } => {
                write!(f, "size line declares {declared} entries but {found} were found")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("node {node} out of range for {count} nodes")]
    NodeOutOfRange { node: usize, count: usize },
    #[error("edge ({src}, {dst}) has invalid weight {weight}")]
    InvalidWeight { src: usize, dst: usize, weight: f64 },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("selected pair ({0}, {1}) has no source edge")]
    MissingEdge(usize, usize),
    #[error("degree cap exceeded when adding ({0}, {1})")]
    CapExceeded(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),
    #[error("auction did not terminate within {rounds} rounds")]
    NonTermination { rounds: usize, partial: Box<AuctionOutcome> },
    #[error("cannot parse {path}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
