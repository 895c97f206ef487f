use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot parse word literal {input:?}: {reason}")]
    ParseWord { input: String, reason: String },

    #[error("sequence has equal neighbours at position {0} and the next one")]
    EqualNeighbours(usize),

    #[error("invalid subsequence selection: {0}")]
    InvalidSelection(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("multiplier out of range for binary slicing: {0}")]
    InvalidSlices(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("generator failure: {0}")]
    Generator(String),
}
