//! Tensor SVD, tubal rank, tensor nuclear norm and its thresholding operator.
//!
//! The tensor nuclear norm is `(1/n3) * sum_ij sigma_ij`, where `sigma_ij` is
//! the `j`-th singular value of the `i`-th Fourier slice. With the
//! unnormalized forward FFT this pairs with `||A||_F^2 = (1/n3) sum_i
//! ||A_bar_i||_F^2`, and the proximal map of `tau * ||.||_*` shrinks every
//! Fourier singular value by exactly `tau`.

use crate::algebra::{
    assemble, conj_transpose, slice_matrix, spectral_map, spectral_map_with, t_product,
    SpectralOpts,
};
use crate::error::{Error, Result};
use crate::fft::{fft_mode3, ifft_mode3};
use crate::svd::{complex_svd, singular_values, CMat};
use crate::tensor::{Dims, Tensor3};

/// Default relative threshold for counting a singular tube as nonzero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Skinny t-SVD `A = U * S * V^*`.
#[derive(Debug, Clone)]
pub struct TSvdFactors {
    pub u: Tensor3,
    pub s: Tensor3,
    pub v: Tensor3,
    /// `sigma[i][j]`: `j`-th singular value of Fourier slice `i`.
    pub sigma: Vec<Vec<f64>>,
    pub rank: usize,
}

impl TSvdFactors {
    /// `U * S * V^*`
    pub fn reconstruct(&self) -> Result<Tensor3> {
        t_product(&t_product(&self.u, &self.s)?, &conj_transpose(&self.v))
    }
}

/// Singular values of every Fourier slice.
pub fn fourier_singular_values(a: &Tensor3) -> Result<Vec<Vec<f64>>> {
    let d = a.dims();
    let fa = fft_mode3(a);
    spectral_map_with(
        d.n3,
        SpectralOpts::default(),
        |k| singular_values(&slice_matrix(&fa, k)),
        Vec::clone,
    )
}

fn rank_from_sigma(sigma: &[Vec<f64>], tol: f64) -> usize {
    let smax = sigma.iter().flatten().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let width = sigma.iter().map(|s| s.len()).max().unwrap_or(0);
    (0..width)
        .filter(|&j| {
            sigma
                .iter()
                .map(|s| s.get(j).copied().unwrap_or(0.0))
                .fold(0.0, f64::max)
                > tol * smax
        })
        .count()
}

/// Number of singular tubes whose largest entry exceeds `tol` times the
/// largest Fourier singular value.
pub fn tubal_rank(a: &Tensor3, tol: f64) -> Result<usize> {
    if a.is_zero() {
        return Ok(0);
    }
    Ok(rank_from_sigma(&fourier_singular_values(a)?, tol))
}

/// Skinny t-SVD with rank `tubal_rank(a, tol)`.
pub fn t_svd(a: &Tensor3, tol: f64) -> Result<TSvdFactors> {
    if a.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let d = a.dims();
    let fa = fft_mode3(a);
    // Factors of mirrored slices must be conjugates of each other for the
    // inverse transform to be real, so the symmetric path is mandatory here.
    let opts = SpectralOpts {
        exploit_symmetry: true,
    };
    let half = d.n3 / 2 + 1;
    let svds = (0..half)
        .map(|k| complex_svd(&slice_matrix(&fa, k)))
        .collect::<Result<Vec<_>>>()?;
    let mut sigma: Vec<Vec<f64>> = svds.iter().map(|s| s.s.clone()).collect();
    for k in half..d.n3 {
        sigma.push(sigma[d.n3 - k].clone());
    }
    let r = rank_from_sigma(&sigma, tol);

    let u_slices = spectral_map(d.n3, opts, |k| {
        let mut u = svds[k].u.clone();
        u.truncate_cols(r);
        Ok(u)
    })?;
    let v_slices = spectral_map(d.n3, opts, |k| {
        let mut v = svds[k].v.clone();
        v.truncate_cols(r);
        Ok(v)
    })?;
    let s_slices = spectral_map(d.n3, opts, |k| {
        let mut s = CMat::zeros(r, r);
        for j in 0..r {
            s[(j, j)] = svds[k].s[j].into();
        }
        Ok(s)
    })?;

    Ok(TSvdFactors {
        u: ifft_mode3(&assemble(u_slices)?)?,
        s: ifft_mode3(&assemble(s_slices)?)?,
        v: ifft_mode3(&assemble(v_slices)?)?,
        sigma,
        rank: r,
    })
}

/// Tensor nuclear norm.
pub fn tnn(a: &Tensor3) -> Result<f64> {
    if a.is_zero() {
        return Ok(0.0);
    }
    let sigma = fourier_singular_values(a)?;
    let total: f64 = sigma.iter().flatten().sum();
    Ok(total / a.dims().n3 as f64)
}

/// Ratio of the tensor nuclear norm to the Frobenius norm.
pub fn tnf(a: &Tensor3) -> Result<f64> {
    let f = a.fro();
    if f == 0.0 {
        return Err(Error::ZeroTensor);
    }
    Ok(tnn(a)? / f)
}

/// Tensor singular value thresholding with the default spectral options.
pub fn t_svt(a: &Tensor3, tau: f64) -> Result<Tensor3> {
    Ok(t_svt_with(a, tau, SpectralOpts::default())?.0)
}

/// Tensor singular value thresholding, also returning the nuclear norm of
/// the result (available for free from the shrunken singular values).
pub fn t_svt_with(a: &Tensor3, tau: f64, opts: SpectralOpts) -> Result<(Tensor3, f64)> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidParam(format!(
            "threshold must be >= 0, got {tau}"
        )));
    }
    let d = a.dims();
    let fa = fft_mode3(a);
    let slices = spectral_map_with(
        d.n3,
        opts,
        |k| {
            let m = slice_matrix(&fa, k);
            let svd = complex_svd(&m)?;
            let mut out = CMat::zeros(m.rows(), m.cols());
            let mut nuclear = 0.0;
            for (j, &s) in svd.s.iter().enumerate() {
                let shrunk = s - tau;
                if !(shrunk > 0.0) {
                    break;
                }
                nuclear += shrunk;
                let uj = svd.u.col(j);
                for (c, vc) in svd.v.col(j).iter().enumerate() {
                    let w = vc.conj() * shrunk;
                    for (dst, ur) in out.col_mut(c).iter_mut().zip(uj) {
                        *dst += ur * w;
                    }
                }
            }
            Ok((out, nuclear))
        },
        |(m, n)| (m.conj(), *n),
    )?;
    let nuclear: f64 = slices.iter().map(|(_, n)| n).sum();
    let out = ifft_mode3(&assemble(slices.into_iter().map(|(m, _)| m).collect())?)?;
    Ok((out, nuclear / d.n3 as f64))
}

/// Incoherence parameters of the skinny t-SVD factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncoherenceReport {
    pub mu_u: f64,
    pub mu_v: f64,
    pub mu_uv: f64,
    pub r: usize,
}

/// Smallest `mu` values for which each incoherence condition holds with
/// equality.
pub fn incoherence(a: &Tensor3, tol: f64) -> Result<IncoherenceReport> {
    let f = t_svd(a, tol)?;
    let d = a.dims();
    let r = f.rank as f64;
    let n3 = d.n3 as f64;
    // U^* * e_i is the i-th horizontal slice of U, rearranged.
    let row_energy = |t: &Tensor3| -> f64 {
        let td = t.dims();
        (0..td.n1)
            .map(|i| {
                let mut e = 0.0;
                for k in 0..td.n3 {
                    for j in 0..td.n2 {
                        e += t.get(i, j, k).powi(2);
                    }
                }
                e
            })
            .fold(0.0, f64::max)
    };
    let uv = t_product(&f.u, &conj_transpose(&f.v))?;
    Ok(IncoherenceReport {
        mu_u: d.n1 as f64 * n3 / r * row_energy(&f.u),
        mu_v: d.n2 as f64 * n3 / r * row_energy(&f.v),
        mu_uv: d.n1 as f64 * d.n2 as f64 * n3 * n3 / r * uv.linf().powi(2),
        r: f.rank,
    })
}

/// `U^* * U` compared with the identity, max-abs entry error.
pub fn orthogonality_defect(u: &Tensor3) -> Result<f64> {
    let g = t_product(&conj_transpose(u), u)?;
    let d = g.dims();
    let mut worst: f64 = 0.0;
    for k in 0..d.n3 {
        for j in 0..d.n2 {
            for i in 0..d.n1 {
                let e = if i == j && k == 0 { 1.0 } else { 0.0 };
                worst = worst.max((g.get(i, j, k) - e).abs());
            }
        }
    }
    Ok(worst)
}

/// Dims of the factors, mostly for assertions.
pub fn factor_dims(f: &TSvdFactors) -> (Dims, Dims, Dims) {
    (f.u.dims(), f.s.dims(), f.v.dims())
}
