use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::tensor::{Dims, Tensor3};

use super::ppm::{load_ppm, save_ppm, to_luma};

/// Frame files (`.ppm` or `.pgm`) in `dir`, sorted by file name.
pub fn frame_paths(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("ppm") || e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    paths.sort();
    Ok(paths)
}

/// Stacks the luma of every frame in `dir` into a `height x width x frames`
/// tensor.
pub fn load_frames(dir: impl AsRef<Path>) -> Result<Tensor3> {
    let dir = dir.as_ref();
    let paths = frame_paths(dir)?;
    if paths.is_empty() {
        return Err(Error::InvalidParam(format!(
            "no .ppm or .pgm frames in {}",
            dir.display()
        )));
    }
    let mut frames = Vec::with_capacity(paths.len());
    for p in &paths {
        frames.push(to_luma(&load_ppm(p)?)?);
    }
    let first = frames[0].dims();
    let mut data = Vec::with_capacity(first.slice_len() * frames.len());
    for (f, p) in frames.iter().zip(&paths) {
        let d = f.dims();
        if (d.n1, d.n2) != (first.n1, first.n2) {
            return Err(Error::DimMismatch(format!(
                "{} is {}x{}, expected {}x{}",
                p.display(),
                d.n1,
                d.n2,
                first.n1,
                first.n2
            )));
        }
        data.extend_from_slice(f.data());
    }
    Tensor3::from_vec(Dims::new(first.n1, first.n2, frames.len())?, data)
}

/// Frontal slice `k` as a single-channel image.
pub fn frame(video: &Tensor3, k: usize) -> Tensor3 {
    let d = video.dims();
    Tensor3::from_vec(
        Dims::new(d.n1, d.n2, 1).expect("nonzero dims"),
        video.frontal(k).to_vec(),
    )
    .expect("slice length")
}

/// Writes each frontal slice to `dir/<prefix>_NNNN.ppm`, numbered from 0.
pub fn save_frames(video: &Tensor3, dir: impl AsRef<Path>, prefix: &str) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    (0..video.dims().n3)
        .map(|k| {
            let p = dir.join(format!("{prefix}_{k:04}.ppm"));
            save_ppm(&frame(video, k), &p)?;
            Ok(p)
        })
        .collect()
}
