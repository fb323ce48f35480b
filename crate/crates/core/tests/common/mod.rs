#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use trpca::fft::fft_mode3;
use trpca::rng::Stream;
use trpca::tsvd::tnn;
use trpca::{CTensor3, Dims, Tensor3};

pub fn dims(n1: usize, n2: usize, n3: usize) -> Dims {
    Dims::new(n1, n2, n3).unwrap()
}

pub fn gaussian(d: Dims, seed: u64) -> Tensor3 {
    Stream::new(seed, 0).gaussian_tensor(d, 1.0)
}

/// Textbook O(n3^2) DFT along the third mode.
pub fn dft_oracle(a: &Tensor3) -> CTensor3 {
    let d = a.dims();
    let n = d.n3 as f64;
    let mut out = CTensor3::zeros(d);
    for i in 0..d.n1 {
        for j in 0..d.n2 {
            for k in 0..d.n3 {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..d.n3 {
                    let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / n;
                    acc += a.get(i, j, t) * Complex64::from_polar(1.0, ang);
                }
                out.data_mut()[d.offset(i, j, k)] = acc;
            }
        }
    }
    out
}

/// Fourier slice `k` of `a` as a dense nalgebra matrix.
pub fn fourier_slice(c: &CTensor3, k: usize) -> DMatrix<Complex64> {
    let d = c.dims();
    DMatrix::from_fn(d.n1, d.n2, |i, j| c.get(i, j, k))
}

/// Block-diagonal matrix of all Fourier slices.
pub fn bdiag(c: &CTensor3) -> DMatrix<Complex64> {
    let d = c.dims();
    let mut m = DMatrix::zeros(d.n1 * d.n3, d.n2 * d.n3);
    for k in 0..d.n3 {
        for i in 0..d.n1 {
            for j in 0..d.n2 {
                m[(k * d.n1 + i, k * d.n2 + j)] = c.get(i, j, k);
            }
        }
    }
    m
}

pub fn rel_err(a: &Tensor3, b: &Tensor3) -> f64 {
    a.sub(b).unwrap().fro() / b.fro().max(f64::MIN_POSITIVE)
}

pub fn tnn_oracle(a: &Tensor3) -> f64 {
    let b = bdiag(&fft_mode3(a));
    b.svd(false, false).singular_values.iter().sum::<f64>() / a.dims().n3 as f64
}

pub fn svt_objective(x: &Tensor3, a: &Tensor3, tau: f64) -> f64 {
    tau * tnn(x).unwrap() + 0.5 * x.sub(a).unwrap().fro_sq()
}

/// Scalar objective of the ratio prox along the ray through `K`, `||K||_F = k`.
pub fn ratio_objective(a: f64, rho: f64, mu: f64, k: f64) -> f64 {
    rho / (a * k) + 0.5 * mu * (a - 1.0).powi(2) * k * k
}

/// Golden-section minimization of the scalar objective over the bracket
/// that must contain the minimizer.
pub fn golden_oracle(rho: f64, mu: f64, k: f64) -> f64 {
    let (mut lo, mut hi) = (1.0, 2.0 + rho / (mu * k * k * k));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..400 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if ratio_objective(x1, rho, mu, k) <= ratio_objective(x2, rho, mu, k) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    0.5 * (lo + hi)
}
