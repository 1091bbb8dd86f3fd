use thiserror::Error;

/// Errors produced by index-set validation, planning and recovery routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("modulus {0} is not a power of two")]
    UnsupportedModulus(u64),

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index {index} out of range for modulus {n}")]
    IndexOutOfRange { index: u64, n: u64 },

    #[error("duplicate index {0}")]
    DuplicateIndex(u64),

    /// The set has the wrong cardinality for its pivot structure: a set with
    /// p pivots is spectral only if it holds exactly 2^p elements.
    #[error("set of size {size} with pivots {pivots:?} is not spectral (expected 2^{} = {expected} elements)", pivots.len())]
    NotSpectral {
        size: usize,
        expected: u64,
        pivots: Vec<u32>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix of dimension {requested} exceeds cap {cap}")]
    ResourceLimit { requested: usize, cap: usize },

    #[error("linear system is numerically singular (residual {0:.3e})")]
    IllConditioned(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
