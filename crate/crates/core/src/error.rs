use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A malformed line in a graph or divisor file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    MissingField(&'static str),
    TrailingInput(String),
    BadNumber(String),
    NonPositiveLength(String),
    OffsetOutOfRange { edge: String, offset: String, length: String },
    UnknownVertex(String),
    UnknownEdge(String),
    DuplicateVertex(String),
    DuplicateEdge(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match self {
            UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            MissingField(what) => write!(f, "missing {what}"),
            TrailingInput(t) => write!(f, "unexpected trailing input `{t}`"),
            BadNumber(s) => write!(f, "malformed number `{s}`"),
            NonPositiveLength(s) => write!(f, "non-positive length `{s}`"),
            OffsetOutOfRange { edge, offset, length } => write!(
                f,
                "offset out of range: {offset} on edge `{edge}` of length {length}"
            ),
            UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            UnknownEdge(e) => write!(f, "unknown edge `{e}`"),
            DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            DuplicateEdge(e) => write!(f, "duplicate edge `{e}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge `{0}` has non-positive length")]
    NonPositiveLength(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("duplicate identifier `{0}`")]
    Duplicate(String),
    #[error("offset {offset} is outside edge `{edge}` of length {length}")]
    OffsetOutOfRange {
        edge: String,
        offset: String,
        length: String,
    },
    #[error("divisor has {found} coefficients but the model has {expected} vertices")]
    ModelMismatch { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("genus {genus} is out of scope: {reason}")]
    Scope { genus: usize, reason: String },
    #[error("enumeration budget of {0} exhausted")]
    Budget(u64),
    #[error("invalid fixture: {0}")]
    Fixture(String),
    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
