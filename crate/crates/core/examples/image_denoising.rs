//! Salt-noise removal on a color image, sweeping lambda.
//!
//! cargo run --release --example image_denoising -- [tnf|tnf+] [image.ppm] [out_dir]
//!
//! Without an image a 128x128 color image of tubal rank 5 is synthesized.

use std::path::PathBuf;

use trpca::experiments::{low_rank_image, psnr, ssim};
use trpca::io::{corrupt_salt, load_ppm, quantize, save_ppm};
use trpca::solver::{solve, SolverConfig, SolverKind};

fn main() -> trpca::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: SolverKind = args.first().map_or(Ok(SolverKind::Tnf), |s| s.parse())?;
    let clean = match args.get(1) {
        Some(p) => load_ppm(p)?,
        None => quantize(&low_rank_image(128, 128, 3, 5, 5)?),
    };
    let out = args.get(2).map(PathBuf::from);

    let (noisy, mask) = corrupt_salt(&clean, 0.2, 17);
    println!(
        "{} pixels corrupted: PSNR {:.2} dB, SSIM {:.4}",
        mask.count(),
        psnr(&clean, &noisy, 255.0)?,
        ssim(&clean, &noisy)?
    );
    let sweep: Vec<f64> = match kind {
        SolverKind::Tnf => (0..5).map(|i| 4.5e-5 + 0.5e-5 * i as f64).collect(),
        SolverKind::TnfPlus => (0..4).map(|i| 1.6e-2 + 0.4e-2 * i as f64).collect(),
        SolverKind::Tnn => vec![trpca::solver::default_lambda(clean.dims())],
    };
    for lambda in sweep {
        let res = solve(kind, &noisy, &SolverConfig::image_denoising(kind, lambda))?;
        let rec = quantize(&res.l_hat);
        println!(
            "{kind} lambda {lambda:.2e}: PSNR {:.2} dB, SSIM {:.4}, {} iterations, converged {}",
            psnr(&clean, &rec, 255.0)?,
            ssim(&clean, &rec)?,
            res.iterations,
            res.converged
        );
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            save_ppm(&rec, dir.join(format!("recovered_{lambda:e}.ppm")))?;
        }
    }
    Ok(())
}
