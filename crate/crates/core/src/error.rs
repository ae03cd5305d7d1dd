//! Shared error type for the geometry engine.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at byte offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("function `{func}` expects {expected} argument(s), got {got}")]
    Arity { func: String, expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow while evaluating expression")]
    Overflow,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("singular metric: {0}")]
    SingularMetric(String),
    #[error("degenerate plane: vectors do not span a 2-plane")]
    DegeneratePlane,
    #[error("rank deficiency: expected rank {expected}, found {found}")]
    RankDeficiency { expected: usize, found: usize },
    #[error("frame extension failure: {0}")]
    FrameExtension(String),
    #[error("sign audit failure: {0}")]
    AuditFailure(String),
    #[error("structure missing: {0}")]
    StructureMissing(String),
    #[error("unsupported structure class: {0}")]
    UnsupportedClass(String),
    #[error("unknown catalog id `{0}`")]
    UnknownId(String),
    #[error("bad catalog params: {0}")]
    BadParams(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
