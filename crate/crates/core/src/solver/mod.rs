//! ADMM solvers for the TNN, TNF and TNF+ models.
//!
//! All three split `X = L + E` with a dual `Z`. TNF additionally splits
//! `L = H` (dual `Y`) so that the ratio `||L||_* / ||H||_F` decouples into a
//! thresholding step for `L` and a scalar rescaling for `H`; TNF+ does the
//! same for the sparse part with `E = D` (dual `U`).

mod admm;
mod config;
mod state;
mod trace;

pub use admm::{
    solve, solve_observed, solve_tnf, solve_tnf_plus, solve_tnn, IterView, SolverResult,
};
pub use config::{
    default_lambda, Init, SolverConfig, SolverKind, UpdateOrder, INIT_EPS, INIT_K_MAX, TNN_MU,
};
pub use state::{
    check_convergence, lagrangian_value, lagrangian_with_nuclear, Condition, ConvergenceCheck,
    SolverState,
};
pub use trace::{IterRecord, IterTrace, TRACE_HEADER};
