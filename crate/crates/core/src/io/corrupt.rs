use crate::rng::{streams, Stream};
use crate::tensor::Tensor3;

/// Pixel positions hit by [`corrupt_salt`]; `hit[i + rows * j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelMask {
    pub rows: usize,
    pub cols: usize,
    pub hit: Vec<bool>,
}

impl PixelMask {
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.hit[i + self.rows * j]
    }

    pub fn count(&self) -> usize {
        self.hit.iter().filter(|&&h| h).count()
    }
}

/// Replaces exactly `floor(fraction * rows * cols)` pixel positions, drawn
/// without replacement, by uniform random integers in `[0, 255]`. Every
/// channel of a chosen pixel gets its own value.
///
/// # Panics
///
/// If `fraction` is outside `[0, 1]`.
pub fn corrupt_salt(img: &Tensor3, fraction: f64, seed: u64) -> (Tensor3, PixelMask) {
    assert!(
        (0.0..=1.0).contains(&fraction),
        "corruption fraction {fraction} outside [0, 1]"
    );
    let d = img.dims();
    let n = d.n1 * d.n2;
    let m = ((fraction * n as f64).floor() as usize).min(n);
    let mut rng = Stream::new(seed, streams::CORRUPTION);

    // partial Fisher-Yates
    let mut order: Vec<usize> = (0..n).collect();
    for t in 0..m {
        let s = t + rng.below((n - t) as u64) as usize;
        order.swap(t, s);
    }
    let mut noisy = img.clone();
    let mut hit = vec![false; n];
    for &p in &order[..m] {
        hit[p] = true;
        let (i, j) = (p % d.n1, p / d.n1);
        for c in 0..d.n3 {
            let idx = d.offset(i, j, c);
            noisy.data_mut()[idx] = rng.below(256) as f64;
        }
    }
    (
        noisy,
        PixelMask {
            rows: d.n1,
            cols: d.n2,
            hit,
        },
    )
}
