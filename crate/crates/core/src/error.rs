use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VlabError {
    #[error("radix m_{index} = {value} must be at least 2")]
    InvalidRadix { index: usize, value: u32 },

    #[error("truncation depth must be at least 1 (got {0})")]
    InvalidDepth(usize),

    #[error("empty radix sequence")]
    EmptyRadices,

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: String, bound: String },

    #[error("digit {digit} at position {position} exceeds radix {radix}")]
    DigitOutOfRange { position: usize, digit: u32, radix: u32 },

    #[error("point has {got} digits, basis depth is {expected}")]
    PointLength { got: usize, expected: usize },

    #[error("dense work on {size} points exceeds the cap of {cap} (set VLAB_DENSE_CAP to raise it)")]
    DenseCapExceeded { size: String, cap: usize },

    #[error("functions live on different bases")]
    BasisMismatch,

    #[error("Q_{n} = 0: the mean is undefined for this weight prefix")]
    ZeroNormalizer { n: u64 },

    #[error("invalid weight parameters: {0}")]
    InvalidWeights(String),

    #[error("exponent p must be positive (got {0})")]
    InvalidExponent(f64),

    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    #[error("invalid counterexample configuration: {0}")]
    InvalidCounterexample(String),

    #[error("{0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, VlabError>;
