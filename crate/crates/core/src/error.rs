use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch ({}x{} vs {}x{})", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{op}: operands are over different action universes")]
    UniverseMismatch { op: &'static str },

    #[error("{0}: matrix is not 0-1")]
    NotZeroOne(&'static str),

    #[error("matrix is singular to tolerance (pivot {pivot:e} in column {column})")]
    Singular { column: usize, pivot: f64 },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not a generator: row {row}: {reason}")]
    NotGenerator { row: usize, reason: String },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid collector: {0}")]
    InvalidCollector(String),

    #[error("invalid distributor: {0}")]
    InvalidDistributor(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("{states} states exceed the enumeration bound of {bound}")]
    TooManyStates { states: usize, bound: usize },

    #[error("bisimulation check failed: {}", .0.summary())]
    CheckFailed(Box<CheckReport>),

    #[error("internal consistency violated: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
