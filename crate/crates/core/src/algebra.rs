//! The t-product algebra: block-circulant products computed slice by slice
//! in the mode-3 Fourier domain, plus the explicit block-circulant forms used
//! as reference implementations.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{fft_mode3, ifft_mode3};
use crate::svd::CMat;
use crate::tensor::{CTensor3, Dims, Tensor3};

/// Options for slicewise Fourier-domain work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralOpts {
    /// Compute only slices `0..=n3/2` and fill the rest by conjugation.
    /// Valid whenever the inputs are transforms of real tensors.
    pub exploit_symmetry: bool,
}

impl Default for SpectralOpts {
    fn default() -> Self {
        Self {
            exploit_symmetry: true,
        }
    }
}

/// Frontal slice `k` of a complex tensor as a matrix.
pub fn slice_matrix(c: &CTensor3, k: usize) -> CMat {
    let d = c.dims();
    CMat::from_col_major(d.n1, d.n2, c.frontal(k).to_vec())
}

/// Evaluates `f` on every Fourier slice index and returns one value per
/// slice. With `exploit_symmetry`, slices above `n3/2` are produced by
/// `mirror` from their conjugate partner instead. Slices are independent, so
/// the result does not depend on how the work is scheduled.
pub fn spectral_map_with<T, F, M>(n3: usize, opts: SpectralOpts, f: F, mirror: M) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
    M: Fn(&T) -> T,
{
    let computed = if opts.exploit_symmetry {
        n3 / 2 + 1
    } else {
        n3
    };
    let mut out: Vec<T> = (0..computed)
        .into_par_iter()
        .map(&f)
        .collect::<Result<Vec<_>>>()?;
    if opts.exploit_symmetry {
        for k in computed..n3 {
            let m = mirror(&out[n3 - k]);
            out.push(m);
        }
    }
    Ok(out)
}

/// [`spectral_map_with`] for matrix-valued slices, mirrored by conjugation.
pub fn spectral_map<F>(n3: usize, opts: SpectralOpts, f: F) -> Result<Vec<CMat>>
where
    F: Fn(usize) -> Result<CMat> + Sync,
{
    spectral_map_with(n3, opts, f, CMat::conj)
}

/// Stacks per-slice matrices into a complex tensor.
pub fn assemble(slices: Vec<CMat>) -> Result<CTensor3> {
    let n3 = slices.len();
    let (n1, n2) = slices
        .first()
        .map(|m| (m.rows(), m.cols()))
        .ok_or_else(|| Error::DimMismatch("no slices".into()))?;
    let dims = Dims::new(n1, n2, n3)?;
    let mut data: Vec<Complex64> = Vec::with_capacity(dims.len());
    for m in slices {
        if m.rows() != n1 || m.cols() != n2 {
            return Err(Error::DimMismatch("ragged slices".into()));
        }
        data.extend(m.into_data());
    }
    CTensor3::from_vec(dims, data)
}

pub fn t_product(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    t_product_with(a, b, SpectralOpts::default())
}

pub fn t_product_with(a: &Tensor3, b: &Tensor3, opts: SpectralOpts) -> Result<Tensor3> {
    let (da, db) = (a.dims(), b.dims());
    if da.n2 != db.n1 || da.n3 != db.n3 {
        return Err(Error::DimMismatch(format!("t-product of {da} and {db}")));
    }
    let fa = fft_mode3(a);
    let fb = fft_mode3(b);
    let slices = spectral_map(da.n3, opts, |k| {
        Ok(slice_matrix(&fa, k).matmul(&slice_matrix(&fb, k)))
    })?;
    ifft_mode3(&assemble(slices)?)
}

/// Chains t-products left to right.
pub fn t_product_chain(factors: &[&Tensor3]) -> Result<Tensor3> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::DimMismatch("empty product".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, t| t_product(&acc, t))
}

/// Frontal slice 0 is `I_n`, all others zero.
pub fn identity_tensor(n: usize, n3: usize) -> Result<Tensor3> {
    let dims = Dims::new(n, n, n3)?;
    let mut t = Tensor3::zeros(dims);
    for i in 0..n {
        t[(i, i, 0)] = 1.0;
    }
    Ok(t)
}

/// Transposes every frontal slice and reverses the order of slices `1..n3`.
pub fn conj_transpose(a: &Tensor3) -> Tensor3 {
    let d = a.dims();
    let out = Dims {
        n1: d.n2,
        n2: d.n1,
        n3: d.n3,
    };
    Tensor3::from_fn(out, |i, j, k| a.get(j, i, (d.n3 - k) % d.n3))
}

/// Row-major dense real matrix used by the block-circulant reference forms.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(r, l);
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(l, c);
                }
            }
        }
        Ok(out)
    }
}

/// Block-circulant matrix: block `(p, q)` is frontal slice `(p - q) mod n3`.
pub fn bcirc_oracle(a: &Tensor3) -> DenseMatrix {
    let d = a.dims();
    let mut m = DenseMatrix::zeros(d.n1 * d.n3, d.n2 * d.n3);
    for p in 0..d.n3 {
        for q in 0..d.n3 {
            let k = (p + d.n3 - q) % d.n3;
            for i in 0..d.n1 {
                for j in 0..d.n2 {
                    m.set(p * d.n1 + i, q * d.n2 + j, a.get(i, j, k));
                }
            }
        }
    }
    m
}

/// Stacks the frontal slices vertically into an `n1*n3 x n2` matrix.
pub fn unfold(a: &Tensor3) -> DenseMatrix {
    let d = a.dims();
    let mut m = DenseMatrix::zeros(d.n1 * d.n3, d.n2);
    for k in 0..d.n3 {
        for i in 0..d.n1 {
            for j in 0..d.n2 {
                m.set(k * d.n1 + i, j, a.get(i, j, k));
            }
        }
    }
    m
}

/// Inverse of [`unfold`].
pub fn fold(m: &DenseMatrix, n1: usize, n3: usize) -> Result<Tensor3> {
    if m.rows != n1 * n3 {
        return Err(Error::DimMismatch(format!(
            "cannot fold {} rows into n1={n1}, n3={n3}",
            m.rows
        )));
    }
    let dims = Dims::new(n1, m.cols, n3)?;
    Ok(Tensor3::from_fn(dims, |i, j, k| m.get(k * n1 + i, j)))
}

/// Reference t-product `fold(bcirc(a) * unfold(b))`.
pub fn t_product_oracle(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    let (da, db) = (a.dims(), b.dims());
    if da.n2 != db.n1 || da.n3 != db.n3 {
        return Err(Error::DimMismatch(format!("t-product of {da} and {db}")));
    }
    fold(&bcirc_oracle(a).matmul(&unfold(b))?, da.n1, da.n3)
}
