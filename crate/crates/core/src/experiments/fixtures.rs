use crate::error::{Error, Result};
use crate::rng::{streams, Stream};
use crate::tensor::{Dims, Tensor3};

use super::synthetic::{gen_low_rank, SyntheticSpec};

/// Low-tubal-rank color image: a rank-`r` tensor affinely rescaled so its
/// entries span exactly `[0, 255]`.
pub fn low_rank_image(
    rows: usize,
    cols: usize,
    channels: usize,
    r: usize,
    seed: u64,
) -> Result<Tensor3> {
    let spec = SyntheticSpec::new(Dims::new(rows, cols, channels)?, r, 0.0, seed)?;
    let l = gen_low_rank(&spec)?;
    let (lo, hi) = l
        .data()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    if !(hi > lo) {
        return Err(Error::ZeroTensor);
    }
    let s = 255.0 / (hi - lo);
    Ok(l.map(|v| if v == hi { 255.0 } else { (v - lo) * s }))
}

/// Static background with a bright square moving across it.
#[derive(Debug, Clone)]
pub struct BackgroundFixture {
    pub video: Tensor3,
    /// The background frame alone (`rows x cols x 1`).
    pub background: Tensor3,
    /// True where the moving block covers a pixel, indexed like `video`.
    pub support: Vec<bool>,
}

/// Gray background values are uniform in `[40, 160]`; the `block x block`
/// square has value 255 and bounces diagonally by one pixel per frame.
pub fn background_fixture(
    rows: usize,
    cols: usize,
    frames: usize,
    block: usize,
    seed: u64,
) -> Result<BackgroundFixture> {
    let dims = Dims::new(rows, cols, frames)?;
    if block == 0 || block > rows || block > cols {
        return Err(Error::InvalidParam(format!(
            "block size {block} does not fit a {rows}x{cols} frame"
        )));
    }
    let mut rng = Stream::new(seed, streams::LOW_RANK_LEFT);
    let background = Tensor3::from_fn(Dims::new(rows, cols, 1)?, |_, _, _| {
        40.0 + (120.0 * rng.uniform()).round()
    });
    let bounce = |t: usize, span: usize| {
        if span == 0 {
            return 0;
        }
        let p = t % (2 * span);
        if p <= span {
            p
        } else {
            2 * span - p
        }
    };
    let mut support = vec![false; dims.len()];
    let video = Tensor3::from_fn(dims, |i, j, k| {
        let (top, left) = (bounce(k, rows - block), bounce(2 * k, cols - block));
        if (top..top + block).contains(&i) && (left..left + block).contains(&j) {
            support[dims.offset(i, j, k)] = true;
            255.0
        } else {
            background.get(i, j, 0)
        }
    });
    Ok(BackgroundFixture {
        video,
        background,
        support,
    })
}

/// Gray-level change above which a pixel counts as foreground.
pub const FOREGROUND_THRESHOLD: f64 = 25.0;

/// `|E|` scaled so its largest entry becomes 255 (all zeros stay zero).
pub fn foreground_magnitude(e: &Tensor3) -> Tensor3 {
    let m = e.linf();
    if m == 0.0 {
        return Tensor3::zeros(e.dims());
    }
    e.map(|v| v.abs() * 255.0 / m)
}

/// Entries with `|E| > threshold`.
pub fn foreground_mask(e: &Tensor3, threshold: f64) -> Vec<bool> {
    e.data().iter().map(|v| v.abs() > threshold).collect()
}

/// Intersection over union of two masks; 1 when both are empty.
pub fn iou(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimMismatch(format!(
            "masks of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    let inter = a.iter().zip(b).filter(|(x, y)| **x && **y).count();
    let union = a.iter().zip(b).filter(|(x, y)| **x || **y).count();
    Ok(if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    })
}
