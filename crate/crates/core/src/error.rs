//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by tensor construction, algebra, and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid shape: dimensions must be >= 1 and their product must fit in memory (got {n1}x{n2}x{n3})")]
    InvalidShape { n1: usize, n2: usize, n3: usize },

    #[error("shape mismatch: expected {expected}, got {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("index ({i}, {j}, {k}) out of range for shape {shape}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        shape: String,
    },

    #[error("duplicate index ({0}, {1}, {2}) in support set")]
    DuplicateIndex(usize, usize, usize),

    #[error("non-finite value at linear offset {0}")]
    NonFinite(usize),

    #[error("input is not conjugate-symmetric: max imaginary residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    NotConjugateSymmetric { residual: f64, tolerance: f64 },

    #[error("off-block-diagonal mass {mass:.3e} exceeds tolerance {tolerance:.3e}")]
    OffBlockDiagonal { mass: f64, tolerance: f64 },

    #[error("factor tensor is not orthonormal: residual {residual:.3e}")]
    NotOrthonormal { residual: f64 },

    #[error("tangent space has rank zero; {0}")]
    RankZero(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("SVD failed to converge on Fourier slice {slice}")]
    SvdFailed { slice: usize },

    #[error(
        "Neumann series diverged after {terms} terms; the support/tangent coupling is too strong"
    )]
    NeumannDiverged { terms: usize },

    #[error("infeasible pair: ||X - L - S||_F = {residual:.3e} relative")]
    InfeasiblePair { residual: f64 },

    #[error("bad magic bytes (expected \"TNS3\")")]
    BadMagic,

    #[error("unsupported format version {0}")]
    BadVersion(u8),

    #[error("declared dimensions overflow or are invalid")]
    DimensionOverflow,

    #[error("truncated payload: expected {expected} values, got {got}")]
    TruncatedPayload { expected: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
