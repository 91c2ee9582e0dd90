use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index ({row}, {col}) out of bounds for a {nrows}x{ncols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("pattern is not symmetric: entry ({row}, {col}) has no mirror")]
    NotSymmetric { row: usize, col: usize },
    #[error("diagonal entry {0} is missing")]
    MissingDiagonal(usize),
    #[error("matrix is not positive definite: pivot {pivot} at column {col}")]
    NotPositiveDefinite { col: usize, pivot: f64 },
    #[error("entry ({row}, {col}) lies outside the symbolic factor pattern")]
    PatternMismatch { row: usize, col: usize },
    #[error("matrix {name} has negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        name: &'static str,
        row: usize,
        col: usize,
        value: f64,
    },
    #[error("matrix {0} must be diagonal")]
    NotDiagonal(&'static str),
    #[error("condition check failed: {count} entries of ones(A'A) are not covered, first at ({row}, {col})")]
    ConditionFailed {
        count: usize,
        row: usize,
        col: usize,
    },
    #[error("zero exact variance at index {0}")]
    ZeroVariance(usize),
    #[error("coarse region {0} has zero total weight")]
    ZeroWeight(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
