//! Tensor robust principal component analysis.
//!
//! Splits a third-order tensor `X` into a low-tubal-rank part `L` and a
//! sparse part `E` by ADMM on one of three models:
//!
//! - **TNN**: `min ||L||_* + lambda ||E||_1` (convex baseline),
//! - **TNF**: `min ||L||_* / ||L||_F + lambda ||E||_1`,
//! - **TNF+**: `min ||L||_* / ||L||_F + lambda ||E||_1 / ||E||_F`,
//!
//! all subject to `X = L + E`, where `||.||_*` is the tensor nuclear norm
//! under the t-product. The crate carries its own t-SVD algebra, a synthetic
//! experiment harness and small I/O helpers for PPM images and a raw binary
//! tensor format.
//!
//! ```no_run
//! use trpca::experiments::{generate, SyntheticSpec};
//! use trpca::solver::{solve, SolverConfig, SolverKind};
//! use trpca::tensor::Dims;
//!
//! let dims = Dims::new(40, 40, 30).unwrap();
//! let data = generate(&SyntheticSpec::new(dims, 3, 0.1, 7).unwrap()).unwrap();
//! let cfg = SolverConfig::synthetic(SolverKind::Tnf, dims);
//! let out = solve(SolverKind::Tnf, &data.x, &cfg).unwrap();
//! println!("converged = {} after {} iterations", out.converged, out.iterations);
//! ```

// Parameter checks use `!(v > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod fft;
pub mod io;
pub mod prox;
pub mod rng;
pub mod solver;
pub mod svd;
pub mod tensor;
pub mod tsvd;

pub use error::{Error, Result};
pub use tensor::{CTensor3, Dims, Tensor3};
