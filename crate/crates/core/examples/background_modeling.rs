//! Background/foreground separation on a synthetic surveillance clip: a
//! static random background with a bright 6x6 square bouncing across it.
//!
//! cargo run --release --example background_modeling -- [tnf|tnf+|tnn] [out_dir]

use std::path::PathBuf;

use trpca::experiments::{background_fixture, foreground_magnitude, foreground_mask, iou};
use trpca::io::save_frames;
use trpca::solver::{solve, SolverConfig, SolverKind};

fn main() -> trpca::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: SolverKind = args.first().map_or(Ok(SolverKind::Tnf), |s| s.parse())?;
    let fx = background_fixture(40, 40, 60, 6, 3)?;
    let dims = fx.video.dims();

    let res = solve(kind, &fx.video, &SolverConfig::background(kind, dims))?;
    println!(
        "{kind}: {} iterations (+{} warm start), converged {}, {} nonzeros in E",
        res.iterations,
        res.init_iterations,
        res.converged,
        res.e_hat.data().iter().filter(|v| **v != 0.0).count()
    );

    let mut spread: f64 = 0.0;
    let mut err: f64 = 0.0;
    for p in 0..dims.slice_len() {
        let tube: Vec<f64> = (0..dims.n3)
            .map(|k| res.l_hat.data()[p + k * dims.slice_len()])
            .collect();
        let lo = tube.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tube.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        spread = spread.max(hi - lo);
        err = err.max(
            tube.iter()
                .map(|v| (v - fx.background.data()[p]).abs())
                .fold(0.0, f64::max),
        );
    }
    println!("background: max spread across frames {spread:.3e}, max error {err:.3e} gray levels");
    for t in [1.0, 10.0, 25.0, 50.0] {
        let m = foreground_mask(&res.e_hat, t);
        println!("foreground |E| > {t}: IoU {:.4}", iou(&m, &fx.support)?);
    }
    if let Some(dir) = args.get(1).map(PathBuf::from) {
        save_frames(&res.l_hat, &dir, "bg")?;
        save_frames(&foreground_magnitude(&res.e_hat), &dir, "fg")?;
        save_frames(&fx.video, &dir, "in")?;
    }
    Ok(())
}
