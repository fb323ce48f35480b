use crate::error::{Error, Result};
use crate::tensor::Tensor3;

/// Relative square error `||a_hat - a0||_F^2 / ||a0||_F^2`.
pub fn rse(a_hat: &Tensor3, a0: &Tensor3) -> Result<f64> {
    let denom = a0.fro_sq();
    if denom == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(a_hat.sub(a0)?.fro_sq() / denom)
}

/// Peak signal-to-noise ratio in dB; `+inf` for identical inputs.
pub fn psnr(reference: &Tensor3, test: &Tensor3, peak: f64) -> Result<f64> {
    let mse = reference.sub(test)?.fro_sq() / reference.dims().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (peak * peak / mse).log10())
}

/// Local window used by [`ssim_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SsimWindow {
    /// Non-overlapping 8x8 blocks with uniform weights.
    #[default]
    Block8,
    /// All 8x8 windows, stride 1, uniform weights.
    Sliding8,
    /// All 11x11 windows, stride 1, Gaussian weights with sigma 1.5.
    Gaussian11,
}

impl SsimWindow {
    fn size(&self) -> usize {
        match self {
            SsimWindow::Block8 | SsimWindow::Sliding8 => 8,
            SsimWindow::Gaussian11 => 11,
        }
    }

    fn stride(&self) -> usize {
        match self {
            SsimWindow::Block8 => 8,
            _ => 1,
        }
    }

    fn weights(&self) -> Vec<f64> {
        let n = self.size();
        let w: Vec<f64> = match self {
            SsimWindow::Gaussian11 => {
                let c = (n / 2) as f64;
                (0..n * n)
                    .map(|p| {
                        let (r, s) = ((p / n) as f64 - c, (p % n) as f64 - c);
                        (-(r * r + s * s) / (2.0 * 1.5 * 1.5)).exp()
                    })
                    .collect()
            }
            _ => vec![1.0; n * n],
        };
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimOpts {
    pub window: SsimWindow,
    pub peak: f64,
}

impl Default for SsimOpts {
    fn default() -> Self {
        Self {
            window: SsimWindow::Block8,
            peak: 255.0,
        }
    }
}

/// Mean structural similarity, averaged over windows and then over
/// channels (frontal slices).
pub fn ssim(reference: &Tensor3, test: &Tensor3) -> Result<f64> {
    ssim_with(reference, test, SsimOpts::default())
}

pub fn ssim_with(reference: &Tensor3, test: &Tensor3, opts: SsimOpts) -> Result<f64> {
    reference.check_same(test)?;
    let d = reference.dims();
    let n = opts.window.size();
    if d.n1 < n || d.n2 < n {
        return Err(Error::TooSmall { window: n });
    }
    let c1 = (0.01 * opts.peak).powi(2);
    let c2 = (0.03 * opts.peak).powi(2);
    let w = opts.window.weights();
    let stride = opts.window.stride();

    let mut channel_sum = 0.0;
    for k in 0..d.n3 {
        let mut total = 0.0;
        let mut count = 0usize;
        let mut top = 0;
        while top + n <= d.n1 {
            let mut left = 0;
            while left + n <= d.n2 {
                let (mut mx, mut my) = (0.0, 0.0);
                for r in 0..n {
                    for s in 0..n {
                        let wt = w[r * n + s];
                        mx += wt * reference.get(top + r, left + s, k);
                        my += wt * test.get(top + r, left + s, k);
                    }
                }
                let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
                for r in 0..n {
                    for s in 0..n {
                        let wt = w[r * n + s];
                        let a = reference.get(top + r, left + s, k) - mx;
                        let b = test.get(top + r, left + s, k) - my;
                        vx += wt * a * a;
                        vy += wt * b * b;
                        cxy += wt * a * b;
                    }
                }
                total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
                left += stride;
            }
            top += stride;
        }
        channel_sum += total / count as f64;
    }
    Ok(channel_sum / d.n3 as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Dims;

    fn constant(v: f64) -> Tensor3 {
        Tensor3::from_vec(Dims::new(16, 16, 1).unwrap(), vec![v; 256]).unwrap()
    }

    #[test]
    fn rse_cases() {
        let a = Tensor3::from_fn(Dims::new(3, 2, 2).unwrap(), |i, j, k| {
            (1 + i + j + k) as f64
        });
        assert_eq!(rse(&a, &a).unwrap(), 0.0);
        assert_eq!(rse(&Tensor3::zeros(a.dims()), &a).unwrap(), 1.0);
        assert!((rse(&a.scale(1.1), &a).unwrap() - 0.01).abs() < 1e-12);
        assert!(matches!(
            rse(&a, &Tensor3::zeros(a.dims())),
            Err(Error::ZeroReference)
        ));
    }

    #[test]
    fn psnr_cases() {
        let z = constant(0.0);
        assert_eq!(psnr(&z, &z, 255.0).unwrap(), f64::INFINITY);
        assert!(psnr(&z, &constant(255.0), 255.0).unwrap().abs() < 1e-12);
        let expect = 10.0 * (255.0f64 * 255.0 / 256.0).log10();
        assert!((psnr(&z, &constant(16.0), 255.0).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 24.05).abs() < 0.01);
    }

    #[test]
    fn ssim_cases() {
        let checker = Tensor3::from_fn(Dims::new(16, 16, 3).unwrap(), |i, j, _| {
            if (i + j) % 2 == 0 {
                255.0
            } else {
                0.0
            }
        });
        for window in [
            SsimWindow::Block8,
            SsimWindow::Sliding8,
            SsimWindow::Gaussian11,
        ] {
            let o = SsimOpts {
                window,
                peak: 255.0,
            };
            assert!((ssim_with(&checker, &checker, o).unwrap() - 1.0).abs() < 1e-12);
            let inv = checker.map(|v| 255.0 - v);
            assert!(ssim_with(&checker, &inv, o).unwrap() < 0.5);
        }
        let s = ssim(&constant(0.0), &constant(255.0)).unwrap();
        assert!(s.abs() < 1e-3, "{s}");
    }

    #[test]
    fn ssim_too_small() {
        let t = Tensor3::zeros(Dims::new(7, 20, 1).unwrap());
        assert!(matches!(ssim(&t, &t), Err(Error::TooSmall { window: 8 })));
    }
}
