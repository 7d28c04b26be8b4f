use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("level count on coordinate {coord} must be at least 2, got {count}")]
    LevelCountTooSmall { coord: usize, count: usize },

    #[error("index {index} has {got} components, expected {expected}")]
    IndexLengthMismatch {
        index: String,
        got: usize,
        expected: usize,
    },

    #[error("index {index} out of range on coordinate {coord} (levels run 1..={max})")]
    IndexOutOfRange {
        index: String,
        coord: usize,
        max: usize,
    },

    #[error("duplicate index {0}")]
    DuplicateIndex(String),

    #[error("entry at {index} is not positive ({value})")]
    NonPositiveEntry { index: String, value: Rational },

    #[error("weights must sum to 1, got {0}")]
    WeightSumNotOne(Rational),

    #[error("{context}: expected {expected} operands, got {got}")]
    ArityMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("operands have mismatched shapes: {0}")]
    ShapeMismatch(String),

    #[error("{0} is not a permutation in one-line notation")]
    NotAPermutation(String),

    #[error("permutation {0} does not have minimal period {1} at every point")]
    NotFullCycle(String, usize),

    #[error("matrix is not a valid transformation matrix: {0}")]
    InvalidMatrix(String),

    #[error("contraction factor {0} is not in (0, 1)")]
    InvalidContraction(f64),

    #[error("induced system is not a similarity system; no per-map contraction factor exists")]
    NotSimilaritySystem,

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("cell budget of {budget} exceeded ({required} cells needed); coarsen the input or raise the budget")]
    BudgetExceeded { budget: usize, required: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("marginal over the first d-1 coordinates of {side} is not uniform: fiber {fiber} has mass {mass}, expected {expected}")]
    NonUniformBaseMarginal {
        side: &'static str,
        fiber: String,
        mass: Box<Rational>,
        expected: Box<Rational>,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
