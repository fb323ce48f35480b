//! Proximal maps shared by the solvers.

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::tensor::Tensor3;

/// Soft thresholding `sign(v) * max(|v| - rho, 0)`.
#[inline]
pub fn shrink(v: f64, rho: f64) -> f64 {
    v.signum() * (v.abs() - rho).max(0.0)
}

/// Elementwise [`shrink`]. An infinite threshold maps everything to zero.
pub fn shrink_tensor(t: &Tensor3, rho: f64) -> Tensor3 {
    t.map(|v| {
        let s = shrink(v, rho);
        // signum(0.0) * 0.0 would otherwise keep a -0.0 around
        if s == 0.0 {
            0.0
        } else {
            s
        }
    })
}

/// Outcome of [`ratio_scale`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioScaleSolution {
    /// Multiplier applied to the input (1 when the fallback was used).
    pub scale: f64,
    pub fallback_used: bool,
    /// Frobenius norm of the random fallback, `cbrt(rho / mu)`.
    pub fallback_norm: f64,
}

/// Root `a >= 1` of `a^3 - a^2 - e = 0` for `e >= 0`.
pub fn ratio_scale_factor(e: f64) -> f64 {
    let b = 27.0 * e + 2.0;
    // b >= 2, so the discriminant is nonnegative up to rounding.
    let disc = (b * b - 4.0).max(0.0);
    let c = ((b + disc.sqrt()) / 2.0).cbrt();
    1.0 / 3.0 + (c + 1.0 / c) / 3.0
}

/// Solves `min_H rho / ||H||_F + (mu / 2) ||H - K||_F^2`.
///
/// For `K != 0` the minimizer is `scale * K` with `scale` the real root of a
/// cubic. For `K = 0` every tensor of norm `cbrt(rho / mu)` is optimal and a
/// Gaussian one is drawn from `rng`.
pub fn ratio_scale(
    rho: f64,
    mu: f64,
    k: &Tensor3,
    rng: &mut Stream,
) -> Result<(Tensor3, RatioScaleSolution)> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParam(format!(
            "mu must be positive, got {mu}"
        )));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::InvalidParam(format!("rho must be >= 0, got {rho}")));
    }
    let fallback_norm = (rho / mu).cbrt();
    let kn = k.fro();
    if kn > 0.0 {
        let e = rho / (mu * kn * kn * kn);
        let scale = ratio_scale_factor(e);
        return Ok((
            k.scale(scale),
            RatioScaleSolution {
                scale,
                fallback_used: false,
                fallback_norm,
            },
        ));
    }
    let mut g = rng.gaussian_tensor(k.dims(), 1.0);
    let gn = g.fro();
    g = if gn > 0.0 && fallback_norm > 0.0 {
        g.scale(fallback_norm / gn)
    } else {
        Tensor3::zeros(k.dims())
    };
    Ok((
        g,
        RatioScaleSolution {
            scale: 1.0,
            fallback_used: true,
            fallback_norm,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Dims;

    #[test]
    fn shrink_values() {
        assert_eq!(shrink(0.7, 1.0), 0.0);
        assert_eq!(shrink(-3.0, 1.0), -2.0);
        assert_eq!(shrink(2.5, 0.0), 2.5);
        assert_eq!(shrink(-0.25, 0.0), -0.25);
        assert_eq!(shrink(5.0, f64::INFINITY), 0.0);
    }

    #[test]
    fn zero_rho_keeps_input() {
        let k = Tensor3::from_fn(Dims::new(2, 2, 2).unwrap(), |i, j, l| {
            (i + j + l) as f64 - 1.0
        });
        let mut rng = Stream::new(0, 0);
        let (h, sol) = ratio_scale(0.0, 3.0, &k, &mut rng).unwrap();
        assert_eq!(sol.scale, 1.0);
        assert!(!sol.fallback_used);
        assert_eq!(h, k);
    }

    #[test]
    fn zero_input_uses_fallback_norm() {
        let k = Tensor3::zeros(Dims::new(3, 2, 4).unwrap());
        let mut rng = Stream::new(9, 0);
        let (h, sol) = ratio_scale(8.0, 1.0, &k, &mut rng).unwrap();
        assert!(sol.fallback_used);
        assert!((h.fro() - 2.0).abs() < 1e-12);
        assert!((sol.fallback_norm - 2.0).abs() < 1e-15);
    }

    #[test]
    fn stationarity() {
        let k = Tensor3::from_fn(Dims::new(3, 3, 2).unwrap(), |i, j, l| {
            ((i * 7 + j * 3 + l) as f64).sin()
        });
        let mut rng = Stream::new(0, 0);
        for (rho, mu) in [(1.0, 1.0), (1e-3, 50.0), (40.0, 0.01)] {
            let (h, _) = ratio_scale(rho, mu, &k, &mut rng).unwrap();
            let hn = h.fro();
            // gradient: -rho H / ||H||^3 + mu (H - K)
            let grad = h
                .scale(-rho / hn.powi(3))
                .add(&h.sub(&k).unwrap().scale(mu))
                .unwrap();
            assert!(grad.fro() <= 1e-8 * mu * k.fro(), "{rho} {mu}");
        }
    }

    #[test]
    fn invalid_params() {
        let k = Tensor3::zeros(Dims::new(1, 1, 1).unwrap());
        let mut rng = Stream::new(0, 0);
        assert!(ratio_scale(1.0, 0.0, &k, &mut rng).is_err());
        assert!(ratio_scale(-1.0, 1.0, &k, &mut rng).is_err());
    }

    #[test]
    fn factor_at_zero_is_one() {
        assert_eq!(ratio_scale_factor(0.0), 1.0);
    }
}
