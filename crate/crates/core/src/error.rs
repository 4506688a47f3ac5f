use thiserror::Error;

/// Errors raised while constructing quantum objects or evaluating bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix data has {len} entries, which is not a square of dimension {n}")]
    NotSquare { n: usize, len: usize },

    #[error("hermiticity check failed: max |A - A^dagger| entry is {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("state is not normalized: norm is {norm}")]
    NotNormalized { norm: f64 },

    #[error("unitarity check failed: max |U^dagger U - I| entry is {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("imaginary residue {residue:e} on a real-valued quantity")]
    ImaginaryResidue { residue: f64 },

    #[error("magnitude entry {index} is negative or non-finite: {value}")]
    InvalidMagnitude { index: usize, value: f64 },

    #[error("weight {0} is outside [0, 1]")]
    InvalidWeight(f64),

    #[error("weight set is empty")]
    EmptyWeights,

    #[error("basis parameter count {found} does not match n(n-1)/2 = {expected}")]
    ParamCount { expected: usize, found: usize },

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(&'static str),

    #[error("invalid sweep: {0}")]
    InvalidSweep(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
