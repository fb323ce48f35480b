//! Dense third-order tensors.
//!
//! Entries are stored with the first index varying fastest, then the second,
//! then the third, so each frontal slice `A(:, :, k)` is a contiguous
//! column-major `n1 x n2` block.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tensor dimensions `n1 x n2 x n3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl Dims {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidParam(format!(
                "dimensions must be positive, got {n1}x{n2}x{n3}"
            )));
        }
        Ok(Self { n1, n2, n3 })
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2 * self.n3
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `max(n1, n2)`
    pub fn n_max(&self) -> usize {
        self.n1.max(self.n2)
    }

    /// `min(n1, n2)`
    pub fn n_min(&self) -> usize {
        self.n1.min(self.n2)
    }

    pub fn slice_len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        i + self.n1 * (j + self.n2 * k)
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.n1, self.n2, self.n3)
    }
}

/// Scalar norms of a tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub fro: f64,
    pub l1: f64,
    pub linf: f64,
}

/// Dense real third-order tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: Dims,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dims: Dims) -> Self {
        Self {
            dims,
            data: vec![0.0; dims.len()],
        }
    }

    pub fn from_vec(dims: Dims, data: Vec<f64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::DimMismatch(format!(
                "{} entries supplied for a {dims} tensor",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dims.len());
        for k in 0..dims.n3 {
            for j in 0..dims.n2 {
                for i in 0..dims.n1 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.dims.offset(i, j, k)]
    }

    /// Frontal slice `k` as a column-major `n1 x n2` block.
    pub fn frontal(&self, k: usize) -> &[f64] {
        let s = self.dims.slice_len();
        &self.data[k * s..(k + 1) * s]
    }

    pub fn frontal_mut(&mut self, k: usize) -> &mut [f64] {
        let s = self.dims.slice_len();
        &mut self.data[k * s..(k + 1) * s]
    }

    pub fn norms(&self) -> Norms {
        let mut sq = 0.0;
        let mut l1 = 0.0;
        let mut linf: f64 = 0.0;
        for &v in &self.data {
            sq += v * v;
            l1 += v.abs();
            linf = linf.max(v.abs());
        }
        Norms {
            fro: sq.sqrt(),
            l1,
            linf,
        }
    }

    pub fn fro(&self) -> f64 {
        self.fro_sq().sqrt()
    }

    pub fn fro_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn l1(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn linf(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn inner(&self, other: &Tensor3) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    /// `max |self - other|`
    pub fn max_abs_diff(&self, other: &Tensor3) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn check_same(&self, other: &Tensor3) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimMismatch(format!(
                "{} vs {}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Tensor3 {
            dims: self.dims,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Result<Tensor3> {
        self.check_same(other)?;
        Ok(Tensor3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Tensor3 {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_map(other, |a, b| a - b)
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: f64, other: &Tensor3) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    /// Reorders the first-mode indices: `out(i, j, k) = self(perm[i], j, k)`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Tensor3> {
        if perm.len() != self.dims.n1 {
            return Err(Error::DimMismatch(format!(
                "permutation of length {} for n1 = {}",
                perm.len(),
                self.dims.n1
            )));
        }
        Ok(Tensor3::from_fn(self.dims, |i, j, k| {
            self.get(perm[i], j, k)
        }))
    }
}

impl Index<(usize, usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &f64 {
        &self.data[self.dims.offset(i, j, k)]
    }
}

impl IndexMut<(usize, usize, usize)> for Tensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut f64 {
        let o = self.dims.offset(i, j, k);
        &mut self.data[o]
    }
}

/// Complex third-order tensor, same layout as [`Tensor3`]. Holds the mode-3
/// Fourier images of real tensors.
#[derive(Debug, Clone, PartialEq)]
pub struct CTensor3 {
    dims: Dims,
    data: Vec<Complex64>,
}

impl CTensor3 {
    pub fn zeros(dims: Dims) -> Self {
        Self {
            dims,
            data: vec![Complex64::new(0.0, 0.0); dims.len()],
        }
    }

    pub fn from_vec(dims: Dims, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dims.len() {
            return Err(Error::DimMismatch(format!(
                "{} entries supplied for a {dims} tensor",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn from_real(t: &Tensor3) -> Self {
        Self {
            dims: t.dims(),
            data: t.data().iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[self.dims.offset(i, j, k)]
    }

    pub fn frontal(&self, k: usize) -> &[Complex64] {
        let s = self.dims.slice_len();
        &self.data[k * s..(k + 1) * s]
    }

    pub fn frontal_mut(&mut self, k: usize) -> &mut [Complex64] {
        let s = self.dims.slice_len();
        &mut self.data[k * s..(k + 1) * s]
    }

    /// Largest deviation from conjugate symmetry between slice `k` and
    /// slice `n3 - k` (0-based), which is zero for the transform of a real
    /// tensor.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n3 = self.dims.n3;
        let mut worst: f64 = 0.0;
        for k in 0..n3 {
            let m = (n3 - k) % n3;
            for (a, b) in self.frontal(k).iter().zip(self.frontal(m)) {
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize, usize)> for CTensor3 {
    type Output = Complex64;
    fn index(&self, (i, j, k): (usize, usize, usize)) -> &Complex64 {
        &self.data[self.dims.offset(i, j, k)]
    }
}

impl IndexMut<(usize, usize, usize)> for CTensor3 {
    fn index_mut(&mut self, (i, j, k): (usize, usize, usize)) -> &mut Complex64 {
        let o = self.dims.offset(i, j, k);
        &mut self.data[o]
    }
}
