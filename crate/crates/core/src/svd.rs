//! Small dense complex matrices and a one-sided Jacobi SVD.

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Off-diagonal Gram entries below this fraction of `sqrt(|a_p|^2 |a_q|^2)`
/// are treated as already orthogonal.
const JACOBI_TOL: f64 = 1e-14;

/// Column-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_col_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "CMat data length");
        Self { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Elementwise complex conjugate.
    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for l in 0..self.cols {
                let b = rhs[(l, j)];
                if b == ZERO {
                    continue;
                }
                for (d, a) in dst.iter_mut().zip(self.col(l)) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn fro(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Keeps the first `k` columns.
    pub fn truncate_cols(&mut self, k: usize) {
        self.data.truncate(self.rows * k);
        self.cols = k;
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i + j * self.rows]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i + j * self.rows]
    }
}

/// Thin SVD `M = U diag(s) V^H` with `k = min(m, n)` columns in `U` and `V`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn reconstruct(&self) -> CMat {
        let mut us = self.u.clone();
        for (j, &s) in self.s.iter().enumerate() {
            for x in us.col_mut(j) {
                *x *= s;
            }
        }
        us.matmul(&self.v.adjoint())
    }
}

fn dot_h(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Applies `[a_p, a_q] <- [a_p, a_q] J` with
/// `J = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]`.
fn rotate(m: &mut CMat, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    let rows = m.rows;
    let (lo, hi) = m.data.split_at_mut(q * rows);
    let ap = &mut lo[p * rows..(p + 1) * rows];
    let aq = &mut hi[..rows];
    for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
        let yp = *y * phase;
        let nx = *x * c - yp * s;
        let ny = *x * s + yp * c;
        *x = nx;
        *y = ny;
    }
}

/// Extends the orthonormal columns `0..k` of `u` to a full orthonormal set by
/// Gram-Schmidt against the standard basis.
fn complete_orthonormal(u: &mut CMat, k: usize) {
    let m = u.rows;
    let mut filled = k;
    let mut candidate = 0;
    while filled < u.cols && candidate < m {
        let mut v = vec![ZERO; m];
        v[candidate] = ONE;
        candidate += 1;
        // Two passes of modified Gram-Schmidt.
        for _ in 0..2 {
            for j in 0..filled {
                let c = dot_h(u.col(j), &v);
                for (x, y) in v.iter_mut().zip(u.col(j)) {
                    *x -= c * y;
                }
            }
        }
        let n = norm_sq(&v).sqrt();
        if n > 1e-8 {
            for (dst, x) in u.col_mut(filled).iter_mut().zip(&v) {
                *dst = x / n;
            }
            filled += 1;
        }
    }
}

/// One-sided Jacobi on a tall (`m >= n`) matrix.
fn jacobi_tall(mut a: CMat) -> Result<Svd> {
    let (m, n) = (a.rows, a.cols);
    let mut v = CMat::identity(n);
    let max_sweeps = 100 * n.max(1);
    let scale = a.fro();
    let floor = (f64::MIN_POSITIVE.sqrt() * scale).powi(2);

    let mut norms: Vec<f64> = (0..n).map(|j| norm_sq(a.col(j))).collect();
    let mut sweep = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot_h(a.col(p), a.col(q));
                let g = gamma.norm();
                if g <= JACOBI_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase = (gamma / g).conj();
                rotate(&mut a, p, q, c, s, phase);
                rotate(&mut v, p, q, c, s, phase);
                norms[p] = alpha - t * g;
                norms[q] = beta + t * g;
            }
        }
        sweep += 1;
        // Refresh the running norms to stop drift.
        for (j, nj) in norms.iter_mut().enumerate() {
            *nj = norm_sq(a.col(j));
        }
        if !rotated {
            break;
        }
        if sweep >= max_sweeps {
            return Err(Error::NoConvergence { sweeps: sweep });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let sig: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    order.sort_by(|&x, &y| sig[y].total_cmp(&sig[x]).then(x.cmp(&y)));

    let smax = sig.iter().cloned().fold(0.0, f64::max);
    let mut u = CMat::zeros(m, n);
    let mut vs = CMat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    let mut nonzero = 0;
    for (dst, &src) in order.iter().enumerate() {
        let sj = sig[src];
        s.push(sj);
        vs.col_mut(dst).copy_from_slice(v.col(src));
        if sj > 0.0 && sj > smax * f64::EPSILON * (m as f64) {
            for (x, y) in u.col_mut(dst).iter_mut().zip(a.col(src)) {
                *x = y / sj;
            }
            nonzero = dst + 1;
        }
    }
    // Columns beyond `nonzero` belong to (numerically) zero singular values.
    for j in nonzero..n {
        for x in u.col_mut(j) {
            *x = ZERO;
        }
    }
    complete_orthonormal(&mut u, nonzero);

    // Phase convention: the first nonzero entry of each V column is real and
    // nonnegative.
    for j in 0..n {
        let pivot = vs.col(j).iter().find(|x| x.norm() > 1e-300).copied();
        if let Some(p) = pivot {
            let ph = (p / p.norm()).conj();
            for x in vs.col_mut(j) {
                *x *= ph;
            }
            for x in u.col_mut(j) {
                *x *= ph;
            }
        }
    }
    Ok(Svd { u, s, v: vs })
}

/// Singular value decomposition of a complex matrix by one-sided Jacobi.
///
/// Returns `k = min(m, n)` singular values in nonincreasing order together
/// with `m x k` and `n x k` factors having orthonormal columns.
pub fn complex_svd(m: &CMat) -> Result<Svd> {
    if m.data
        .iter()
        .any(|x| !x.re.is_finite() || !x.im.is_finite())
    {
        return Err(Error::InvalidParam(
            "SVD input has non-finite entries".into(),
        ));
    }
    if m.rows >= m.cols {
        jacobi_tall(m.clone())
    } else {
        let t = jacobi_tall(m.adjoint())?;
        Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        })
    }
}

/// Singular values only.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    Ok(complex_svd(m)?.s)
}
