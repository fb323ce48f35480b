//! Mode-3 discrete Fourier transform of third-order tensors.
//!
//! Forward transforms are unnormalized; the inverse carries the `1/n3`
//! factor, so `ifft_mode3(fft_mode3(a)) == a`. Any tube length is supported
//! (composite lengths go through mixed-radix kernels, primes through
//! Bluestein/Rader).

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::tensor::{CTensor3, Tensor3};

/// Relative bound on the imaginary part left after an inverse transform.
pub const IMAG_RESIDUAL_TOL: f64 = 1e-6;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// Transforms every tube of `data` (layout of [`CTensor3`]) in place.
fn transform_tubes(data: &mut [Complex64], slice_len: usize, n3: usize, direction: FftDirection) {
    if n3 == 1 {
        return;
    }
    // Gather tubes into contiguous rows, run the batched FFT, scatter back.
    let mut tubes = vec![Complex64::new(0.0, 0.0); data.len()];
    for k in 0..n3 {
        for p in 0..slice_len {
            tubes[p * n3 + k] = data[k * slice_len + p];
        }
    }
    plan(n3, direction).process(&mut tubes);
    for k in 0..n3 {
        for p in 0..slice_len {
            data[k * slice_len + p] = tubes[p * n3 + k];
        }
    }
}

pub fn fft_mode3(a: &Tensor3) -> CTensor3 {
    let mut out = CTensor3::from_real(a);
    let d = a.dims();
    transform_tubes(out.data_mut(), d.slice_len(), d.n3, FftDirection::Forward);
    out
}

/// Inverse mode-3 transform keeping the complex result.
pub fn ifft_mode3_complex(c: &CTensor3) -> CTensor3 {
    let mut out = c.clone();
    let d = c.dims();
    transform_tubes(out.data_mut(), d.slice_len(), d.n3, FftDirection::Inverse);
    let scale = 1.0 / d.n3 as f64;
    for v in out.data_mut() {
        *v *= scale;
    }
    out
}

/// Inverse mode-3 transform returning the real part together with the
/// largest discarded imaginary magnitude.
pub fn ifft_mode3_with_residual(c: &CTensor3) -> (Tensor3, f64) {
    let z = ifft_mode3_complex(c);
    let mut residual: f64 = 0.0;
    let re: Vec<f64> = z
        .data()
        .iter()
        .map(|v| {
            residual = residual.max(v.im.abs());
            v.re
        })
        .collect();
    let t = Tensor3::from_vec(c.dims(), re).expect("dims preserved");
    (t, residual)
}

/// Inverse mode-3 transform of the Fourier image of a real tensor.
///
/// Fails with [`Error::ImagResidualTooLarge`] when the input is far from
/// conjugate symmetric.
pub fn ifft_mode3(c: &CTensor3) -> Result<Tensor3> {
    let (t, residual) = ifft_mode3_with_residual(c);
    let allowed = IMAG_RESIDUAL_TOL * (1.0 + t.linf());
    if residual > allowed {
        return Err(Error::ImagResidualTooLarge { residual, allowed });
    }
    Ok(t)
}
