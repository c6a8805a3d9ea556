//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("set must be nonempty")]
    EmptySet,

    #[error("set element {value} outside [0, {q})")]
    ElementOutOfRange { value: u64, q: u64 },

    #[error("duplicate element {value} in set")]
    DuplicateElement { value: u64 },

    #[error("input {x} outside [0, {q})")]
    InputOutOfRange { x: u64, q: u64 },

    #[error("qudit index {index} outside [0, {m})")]
    QuditIndexOutOfRange { index: usize, m: usize },

    #[error("invalid hash parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized: |norm² − 1| = {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("states are not orthonormal: worst Gram deviation {deviation:.3e}")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix is not Hermitian: max deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace {trace} deviates from 1 beyond tolerance {tolerance}")]
    TraceNotUnit { trace: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("search space infeasible: {0}")]
    Infeasible(String),

    #[error("shots must be at least 1")]
    ZeroShots,

    #[error("invalid matrix text: {0}")]
    MatrixParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
