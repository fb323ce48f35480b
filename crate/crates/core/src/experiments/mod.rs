//! Synthetic instances, recovery metrics, phase-transition grids and
//! convergence curves.

mod convergence;
mod fixtures;
mod grid;
mod metrics;
mod synthetic;

pub use convergence::{capture_convergence, ConvergenceCurves, CONVERGENCE_HEADER};
pub use fixtures::{
    background_fixture, foreground_magnitude, foreground_mask, iou, low_rank_image,
    BackgroundFixture, FOREGROUND_THRESHOLD,
};
pub use grid::{
    run_grid, run_grid_with_progress, CellSummary, GridSpec, SuccessGrid, TrialFailure,
    GRID_HEADER, SUCCESS_RSE,
};
pub use metrics::{psnr, rse, ssim, ssim_with, SsimOpts, SsimWindow};
pub use synthetic::{gen_low_rank, gen_sparse, generate, SyntheticData, SyntheticSpec};
