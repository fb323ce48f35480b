use std::fmt;

use crate::error::{Error, Result};
use crate::tensor::Tensor3;
use crate::tsvd::tnn;

/// ADMM iterate. `h`/`y` exist for TNF and TNF+, `d`/`u` only for TNF+.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub l: Tensor3,
    pub h: Option<Tensor3>,
    pub e: Tensor3,
    pub d: Option<Tensor3>,
    pub y: Option<Tensor3>,
    pub z: Tensor3,
    pub u: Option<Tensor3>,
    pub mu1: f64,
    pub mu2: f64,
    pub mu3: f64,
    pub k: usize,
}

/// One stopping condition of the ADMM loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    DeltaL,
    DeltaH,
    DeltaE,
    DeltaD,
    DeltaY,
    DeltaZ,
    DeltaU,
    /// `||L + E - X||_inf`
    Feasibility,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::DeltaL => "dL",
            Condition::DeltaH => "dH",
            Condition::DeltaE => "dE",
            Condition::DeltaD => "dD",
            Condition::DeltaY => "dY",
            Condition::DeltaZ => "dZ",
            Condition::DeltaU => "dU",
            Condition::Feasibility => "feasibility",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCheck {
    pub converged: bool,
    pub residuals: Vec<(Condition, f64)>,
}

impl ConvergenceCheck {
    pub fn get(&self, c: Condition) -> Option<f64> {
        self.residuals
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| *v)
    }

    /// Conditions above the tolerance.
    pub fn offending(&self, eps: f64) -> Vec<Condition> {
        self.residuals
            .iter()
            .filter(|(_, v)| !(*v <= eps))
            .map(|(c, _)| *c)
            .collect()
    }
}

fn delta(a: &Option<Tensor3>, b: &Option<Tensor3>) -> Result<Option<f64>> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(Some(a.max_abs_diff(b)?)),
        _ => Ok(None),
    }
}

/// Evaluates every infinity-norm stopping condition that applies to the
/// variables present in `state`; converged iff all are `<= eps`.
pub fn check_convergence(
    state: &SolverState,
    prev: &SolverState,
    x: &Tensor3,
    eps: f64,
) -> Result<ConvergenceCheck> {
    let mut residuals = vec![(Condition::DeltaL, state.l.max_abs_diff(&prev.l)?)];
    if let Some(v) = delta(&state.h, &prev.h)? {
        residuals.push((Condition::DeltaH, v));
    }
    residuals.push((Condition::DeltaE, state.e.max_abs_diff(&prev.e)?));
    if let Some(v) = delta(&state.d, &prev.d)? {
        residuals.push((Condition::DeltaD, v));
    }
    if let Some(v) = delta(&state.y, &prev.y)? {
        residuals.push((Condition::DeltaY, v));
    }
    residuals.push((Condition::DeltaZ, state.z.max_abs_diff(&prev.z)?));
    if let Some(v) = delta(&state.u, &prev.u)? {
        residuals.push((Condition::DeltaU, v));
    }
    residuals.push((Condition::Feasibility, feasibility(state, x)?));
    let converged = residuals.iter().all(|(_, v)| *v <= eps);
    Ok(ConvergenceCheck {
        converged,
        residuals,
    })
}

pub(crate) fn feasibility(state: &SolverState, x: &Tensor3) -> Result<f64> {
    x.check_same(&state.l)?;
    Ok(state
        .l
        .data()
        .iter()
        .zip(state.e.data())
        .zip(x.data())
        .fold(0.0, |m, ((l, e), x)| m.max((l + e - x).abs())))
}

/// Augmented Lagrangian of the model matching the variables in `state`,
/// evaluated with the penalties stored in `state`.
pub fn lagrangian_value(state: &SolverState, x: &Tensor3, lambda: f64) -> Result<f64> {
    let nuclear = tnn(&state.l)?;
    lagrangian_with_nuclear(state, x, lambda, nuclear)
}

/// [`lagrangian_value`] with a precomputed `||L||_*`.
pub fn lagrangian_with_nuclear(
    state: &SolverState,
    x: &Tensor3,
    lambda: f64,
    nuclear: f64,
) -> Result<f64> {
    let r = state.l.add(&state.e)?.sub(x)?;
    let mut value = 0.5 * state.mu2 * r.fro_sq() + state.z.inner(&r)?;

    let low_rank = match &state.h {
        None => nuclear,
        Some(h) => {
            let hn = h.fro();
            if hn == 0.0 {
                return Err(Error::ZeroTensor);
            }
            let lh = state.l.sub(h)?;
            let y_term = match &state.y {
                Some(y) => y.inner(&lh)?,
                None => 0.0,
            };
            nuclear / hn + 0.5 * state.mu1 * lh.fro_sq() + y_term
        }
    };
    value += low_rank;

    let sparse = match &state.d {
        None => lambda * state.e.l1(),
        Some(d) => {
            let dn = d.fro();
            if dn == 0.0 {
                return Err(Error::ZeroTensor);
            }
            let ed = state.e.sub(d)?;
            let u_term = match &state.u {
                Some(u) => u.inner(&ed)?,
                None => 0.0,
            };
            lambda * state.e.l1() / dn + 0.5 * state.mu3 * ed.fro_sq() + u_term
        }
    };
    Ok(value + sparse)
}
