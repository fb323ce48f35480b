use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the tensor algebra, solvers, experiment harness and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("inverse FFT left an imaginary residual of {residual:e} (allowed {allowed:e})")]
    ImagResidualTooLarge { residual: f64, allowed: f64 },

    #[error("operation undefined for the zero tensor")]
    ZeroTensor,

    #[error("complex SVD did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("non-finite value in `{variable}` at iteration {iteration}")]
    NonFinite {
        variable: &'static str,
        iteration: usize,
    },

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("reference tensor is zero")]
    ZeroReference,

    #[error("image smaller than the {window}x{window} SSIM window")]
    TooSmall { window: usize },

    #[error("{path}: bad magic bytes")]
    BadMagic { path: PathBuf },

    #[error("{path}: unsupported dtype {dtype}")]
    BadDtype { path: PathBuf, dtype: u8 },

    #[error("{path}: payload size mismatch (expected {expected} bytes, found {found})")]
    SizeMismatch {
        path: PathBuf,
        expected: u64,
        found: u64,
    },

    #[error("{path}: unsupported maxval {maxval}")]
    BadMaxval { path: PathBuf, maxval: u32 },

    #[error("{path}: truncated file")]
    TruncatedFile { path: PathBuf },

    #[error("{path}: malformed header: {reason}")]
    BadHeader { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
