use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum BjError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vectors live in different spaces")]
    SpaceMismatch,
    #[error("invalid norm exponent p = {0}; need p >= 1")]
    InvalidExponent(f64),
    #[error("invalid norm space: {0}")]
    InvalidSpace(String),
    #[error("inner product undefined for p = {0}; only p = 2 carries one")]
    InnerProductUndefined(String),
    #[error("norming functional requires 1 < p < inf (smooth case); got p = {0}")]
    NonSmoothNorm(String),
    #[error("epsilon {0} outside [0, 1)")]
    InvalidEpsilon(f64),
    #[error("non-finite evaluation at lambda = {lambda}")]
    NonFiniteEval { lambda: f64 },
    #[error("empty bracket: lo {lo} >= hi {hi}")]
    EmptyBracket { lo: f64, hi: f64 },
    #[error("operator is zero; {0} undefined")]
    ZeroOperator(String),
    #[error("zero vector not allowed here: {0}")]
    ZeroVector(String),
    #[error("sign-vector enumeration needs dim <= {max}, got {got}")]
    DimensionOverflow { max: usize, got: usize },
    #[error("operation requires p = 2 on both sides (Hilbert case)")]
    NonHilbert,
    #[error("operator shape {rows}x{cols} incompatible with spaces {dom}/{cod}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        dom: usize,
        cod: usize,
    },
    #[error("matrix file malformed: {0}")]
    MalformedMatrixFile(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BjError>;
