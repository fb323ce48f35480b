use crate::algebra::t_product;
use crate::error::{Error, Result};
use crate::rng::{streams, Stream};
use crate::tensor::{Dims, Tensor3};

/// Parameters of one synthetic low-rank plus sparse instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub dims: Dims,
    /// Target tubal rank.
    pub r: usize,
    /// Probability of each sign; the overall corruption rate is `2 * gamma`.
    pub gamma: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(dims: Dims, r: usize, gamma: f64, seed: u64) -> Result<Self> {
        let spec = Self {
            dims,
            r,
            gamma,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Spec from the corruption rate `2 * gamma`.
    pub fn with_sparsity(dims: Dims, r: usize, sparsity: f64, seed: u64) -> Result<Self> {
        Self::new(dims, r, sparsity / 2.0, seed)
    }

    pub fn sparsity(&self) -> f64 {
        2.0 * self.gamma
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 1 || self.r > self.dims.n_min() {
            return Err(Error::InvalidSpec(format!(
                "rank {} outside 1..={}",
                self.r,
                self.dims.n_min()
            )));
        }
        if !(0.0..=0.5).contains(&self.gamma) {
            return Err(Error::InvalidSpec(format!(
                "sampling rate {} outside [0, 1]",
                2.0 * self.gamma
            )));
        }
        Ok(())
    }
}

/// `P * Q` with `P ~ N(0, 1/n1)` of size `n1 x r x n3` and `Q ~ N(0, 1/n2)`
/// of size `r x n2 x n3`.
pub fn gen_low_rank(spec: &SyntheticSpec) -> Result<Tensor3> {
    spec.validate()?;
    let d = spec.dims;
    let p = Stream::new(spec.seed, streams::LOW_RANK_LEFT)
        .gaussian_tensor(Dims::new(d.n1, spec.r, d.n3)?, 1.0 / (d.n1 as f64).sqrt());
    let q = Stream::new(spec.seed, streams::LOW_RANK_RIGHT)
        .gaussian_tensor(Dims::new(spec.r, d.n2, d.n3)?, 1.0 / (d.n2 as f64).sqrt());
    t_product(&p, &q)
}

/// I.i.d. entries: `+1` with probability `gamma`, `-1` with probability
/// `gamma`, otherwise 0.
pub fn gen_sparse(spec: &SyntheticSpec) -> Result<Tensor3> {
    spec.validate()?;
    let mut rng = Stream::new(spec.seed, streams::SPARSE);
    let g = spec.gamma;
    Ok(Tensor3::from_fn(spec.dims, |_, _, _| {
        let u = rng.uniform();
        if u < g {
            1.0
        } else if u < 2.0 * g {
            -1.0
        } else {
            0.0
        }
    }))
}

/// Ground truth and observation of one synthetic instance.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub l0: Tensor3,
    pub e0: Tensor3,
    pub x: Tensor3,
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    let l0 = gen_low_rank(spec)?;
    let e0 = gen_sparse(spec)?;
    let x = l0.add(&e0)?;
    Ok(SyntheticData { l0, e0, x })
}
