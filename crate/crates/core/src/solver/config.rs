use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tensor::{Dims, Tensor3};

/// Which model to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    /// Convex baseline: tensor nuclear norm plus l1.
    Tnn,
    /// Nuclear-over-Frobenius ratio plus l1.
    Tnf,
    /// Nuclear-over-Frobenius ratio plus l1-over-Frobenius ratio.
    TnfPlus,
}

impl SolverKind {
    pub fn name(&self) -> &'static str {
        match self {
            SolverKind::Tnn => "tnn",
            SolverKind::Tnf => "tnf",
            SolverKind::TnfPlus => "tnf+",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tnn" => Ok(SolverKind::Tnn),
            "tnf" => Ok(SolverKind::Tnf),
            "tnf+" | "tnfplus" | "tnf-plus" => Ok(SolverKind::TnfPlus),
            other => Err(Error::InvalidParam(format!("unknown method `{other}`"))),
        }
    }
}

/// Starting point of the nonconvex solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// Warm start from a loosely converged TNN solve.
    Tnn,
    Zeros,
    Given {
        l: Tensor3,
        e: Tensor3,
    },
}

/// Order of the two decoupled subproblems inside one TNF iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    #[default]
    HThenE,
    EThenH,
}

/// ADMM hyperparameters and schedules.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub lambda: f64,
    pub mu1: f64,
    pub mu2: f64,
    /// Only used by TNF+.
    pub mu3: f64,
    pub mu_growth: f64,
    pub mu_cap: f64,
    pub eps: f64,
    pub k_max: usize,
    pub init: Init,
    pub seed: u64,
    pub order: UpdateOrder,
}

/// `1 / sqrt(max(n1, n2) * n3)`
pub fn default_lambda(dims: Dims) -> f64 {
    1.0 / ((dims.n_max() * dims.n3) as f64).sqrt()
}

/// Loose settings for the TNN warm start.
pub const INIT_EPS: f64 = 1e-3;
pub const INIT_K_MAX: usize = 100;
pub const TNN_MU: f64 = 1e-3;

impl SolverConfig {
    pub fn new(lambda: f64) -> Self {
        Self {
            lambda,
            mu1: 1e-4,
            mu2: 1e-3,
            mu3: 1e-3,
            mu_growth: 1.1,
            mu_cap: 1e10,
            eps: 1e-4,
            k_max: 500,
            init: Init::Tnn,
            seed: 0,
            order: UpdateOrder::HThenE,
        }
    }

    /// Settings for the synthetic low-rank plus sparse experiments.
    pub fn synthetic(kind: SolverKind, dims: Dims) -> Self {
        match kind {
            SolverKind::Tnn => Self {
                mu2: TNN_MU,
                ..Self::new(default_lambda(dims))
            },
            SolverKind::Tnf => Self {
                mu1: 1e-4,
                mu2: 1e-3,
                ..Self::new(2e-4)
            },
            SolverKind::TnfPlus => Self {
                mu1: 1e-4,
                mu2: 1e-3,
                mu3: 1e-3,
                ..Self::new(default_lambda(dims))
            },
        }
    }

    /// Settings for color image denoising at a given `lambda`.
    pub fn image_denoising(kind: SolverKind, lambda: f64) -> Self {
        match kind {
            SolverKind::Tnn => Self {
                mu2: TNN_MU,
                ..Self::new(lambda)
            },
            SolverKind::Tnf => Self {
                mu1: 1e-4,
                mu2: 1e-4,
                ..Self::new(lambda)
            },
            SolverKind::TnfPlus => Self {
                mu1: 1e-4,
                mu2: 1e-2,
                mu3: 1e-4,
                ..Self::new(lambda)
            },
        }
    }

    /// Settings for video background modeling.
    pub fn background(kind: SolverKind, dims: Dims) -> Self {
        match kind {
            SolverKind::Tnn => Self {
                mu2: TNN_MU,
                ..Self::new(default_lambda(dims))
            },
            SolverKind::Tnf => Self {
                mu1: 1e-5,
                mu2: 1e-5,
                ..Self::new(1e-6)
            },
            SolverKind::TnfPlus => Self {
                mu1: 1e-5,
                mu2: 1e-3,
                mu3: 1e-5,
                ..Self::new(default_lambda(dims))
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda", self.lambda),
            ("mu1", self.mu1),
            ("mu2", self.mu2),
            ("mu3", self.mu3),
            ("eps", self.eps),
            ("mu_cap", self.mu_cap),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.mu_growth >= 1.0) || !self.mu_growth.is_finite() {
            return Err(Error::InvalidParam(format!(
                "mu_growth must be >= 1, got {}",
                self.mu_growth
            )));
        }
        Ok(())
    }

    /// Settings of the TNN warm start derived from this config.
    pub fn warm_start(&self, dims: Dims) -> SolverConfig {
        SolverConfig {
            lambda: default_lambda(dims),
            mu2: TNN_MU,
            eps: INIT_EPS,
            k_max: INIT_K_MAX,
            init: Init::Zeros,
            ..self.clone()
        }
    }
}
