use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("out of range: {0}")]
    Range(String),
    #[error("not an ideal: {0}")]
    InvalidIdeal(String),
    #[error("sets of different cardinality: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
    #[error("expected exactly one {r}-ideal, found {count}")]
    NotUnique { r: usize, count: usize },
    #[error("ideal family does not have the three-ideal shape: {0}")]
    ShapeMismatch(String),
    #[error("duplicate codeword {0}")]
    DuplicateWord(String),
    #[error("check function maps {input} outside the check positions: {output}")]
    InvalidCheckFunction { input: String, output: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
