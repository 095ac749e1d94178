use thiserror::Error;

use crate::validate::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field `{path}`: {message}")]
    Field { path: String, message: String },
    #[error("unsupported format version {found:?}, expected {expected}")]
    Version { found: Option<u64>, expected: u64 },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("instance failed validation:\n{0}")]
    InvalidInstance(ValidationReport),
    #[error("budget `{0}` must be positive")]
    Budget(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate does not fit the instance: {0}")]
    Certificate(String),
    #[error("too many II folds ({0}); at most 64 are supported")]
    TooManyFolds(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 4,
            _ => 3,
        }
    }
}
