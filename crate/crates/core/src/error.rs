use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("eigenvalue {index} is not strictly positive: {value}")]
    NonPositiveEigenvalue { index: usize, value: f64 },
    #[error("spectrum not descending at indices {index} and {}: {prev} < {next}", index + 1)]
    NotDescending { index: usize, prev: f64, next: f64 },
    #[error("perturbation vector {index} has length {len}, expected {expected}")]
    DimensionMismatch { index: usize, len: usize, expected: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("matrix is not positive definite: eigenvalue {index} is {value}")]
    NotPositiveDefinite { index: usize, value: f64 },
    #[error(
        "secular bracket ({lower}, {upper}) does not contain a root: f(lower) = {f_lower:e}, f(upper) = {f_upper:e}"
    )]
    BracketFailure { lower: f64, upper: f64, f_lower: f64, f_upper: f64 },
    #[error("eigenvalue {index} coincides with pole {pole} which was not deflated")]
    UndeflatedPole { index: usize, pole: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("entry {index} of v is zero; use the rank-m eigenvalue bound instead")]
    ZeroEntry { index: usize },
    #[error("spectrum is not strictly descending at index {index}; use the rank-m eigenvalue bound instead")]
    NonStrictSpectrum { index: usize },
    #[error("only {found} points in the asymptotic regime, need at least 3")]
    InsufficientPoints { found: usize },
    #[error("instance with seed {seed}: {source}")]
    Instance { seed: u64, source: Box<Error> },
}
