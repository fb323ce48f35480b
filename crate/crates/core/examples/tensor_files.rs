//! Tensor and image files: TNS1 round trip, PPM encode/decode with clamping,
//! salt corruption, and a frame directory loaded as a video tensor.
//!
//! cargo run --example tensor_files -- [dir]

use std::path::PathBuf;

use trpca::experiments::psnr;
use trpca::io::{corrupt_salt, load_frames, load_ppm, read_tns, save_frames, save_ppm, write_tns};
use trpca::rng::Stream;
use trpca::{Dims, Tensor3};

fn main() -> trpca::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("trpca_tensor_files"));
    std::fs::create_dir_all(&dir)?;

    let t = Stream::new(1, 0).gaussian_tensor(Dims::new(3, 4, 5)?, 1.0);
    let p = dir.join("t.tns");
    write_tns(&p, &t)?;
    println!(
        "{} round trip bit-identical: {}",
        p.display(),
        read_tns(&p)? == t
    );

    let img = Tensor3::from_fn(Dims::new(32, 48, 3)?, |i, j, c| {
        (i * 8 + j * 5 + c * 60) as f64 - 20.0
    });
    let p = dir.join("gradient.ppm");
    save_ppm(&img, &p)?;
    let back = load_ppm(&p)?;
    println!(
        "saved {} (values clamped to [0, 255]): min {}, max {}",
        p.display(),
        back.data().iter().cloned().fold(f64::INFINITY, f64::min),
        back.data()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    );

    let (noisy, mask) = corrupt_salt(&back, 0.2, 3);
    println!(
        "corrupted {} of {} pixels, PSNR {:.2} dB",
        mask.count(),
        32 * 48,
        psnr(&back, &noisy, 255.0)?
    );

    let video = Tensor3::from_fn(Dims::new(16, 16, 4)?, |i, j, k| {
        ((i + j + 10 * k) % 256) as f64
    });
    let frames = dir.join("frames");
    save_frames(&video, &frames, "frame")?;
    let loaded = load_frames(&frames)?;
    println!(
        "{} frames reloaded as {}: identical {}",
        video.dims().n3,
        loaded.dims(),
        loaded == video
    );
    Ok(())
}
