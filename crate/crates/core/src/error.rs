//! Error type shared by all estimation modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CopwaveError {
    #[error("unsupported wavelet order {order}: supported orders are 1..=10")]
    UnsupportedOrder { order: usize },

    #[error("cascade refinement failed: the integer-grid eigenproblem is degenerate")]
    DegenerateFilter,

    #[error("matrix side {side} is not a power of two")]
    NonPowerOfTwo { side: usize },

    #[error("pyramid shape mismatch at level {level}: expected {expected} rows, got {got}")]
    PyramidShape {
        level: usize,
        expected: usize,
        got: usize,
    },

    #[error("matrix side {side} is smaller than the requested coarse level 2^{coarse}")]
    CoarseTooDeep { side: usize, coarse: usize },

    #[error("sample too small: n = {n}, need n >= {min}")]
    SampleTooSmall { n: usize, min: usize },

    #[error("sample must be n x 2, got {cols} columns")]
    BadDimension { cols: usize },

    #[error("sample contains a non-finite value at row {row}")]
    NonFiniteValue { row: usize },

    #[error("invalid {family} parameter: {detail}")]
    InvalidParameter { family: &'static str, detail: String },

    #[error("grids differ in size: {a} vs {b}")]
    GridSizeMismatch { a: usize, b: usize },

    #[error("truth grid has zero norm; relative error is undefined")]
    ZeroNormTruth,

    #[error("need at least {min} repetitions, got {got}")]
    TooFewRepetitions { got: usize, min: usize },

    #[error("spins = {spins} is not a perfect square")]
    SpinsNotSquare { spins: usize },

    #[error("sparse construction requires d/2 <= alpha < s + d/2, got alpha = {alpha}, s = {s}")]
    AlphaOutOfRange { alpha: f64, s: f64 },
}

pub type Result<T> = std::result::Result<T, CopwaveError>;
