use std::io::Write;

use crate::error::Result;
use crate::solver::{solve_observed, SolverConfig, SolverKind, SolverResult};
use crate::tensor::Tensor3;

use super::metrics::rse;

pub const CONVERGENCE_HEADER: &str = "k,rse_L,rse_E";

/// Per-iteration errors of `L^(k)` and `E^(k)` against the ground truth.
#[derive(Debug, Clone)]
pub struct ConvergenceCurves {
    pub k: Vec<usize>,
    pub rse_l: Vec<f64>,
    /// RSE of `E^(k)`, or `||E^(k)||_F` when `e_absolute` is set.
    pub rse_e: Vec<f64>,
    /// Set when the reference `E0` is zero and relative errors are undefined.
    pub e_absolute: bool,
    pub result: SolverResult,
}

impl ConvergenceCurves {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{CONVERGENCE_HEADER}")?;
        for ((k, l), e) in self.k.iter().zip(&self.rse_l).zip(&self.rse_e) {
            writeln!(w, "{k},{l:e},{e:e}")?;
        }
        Ok(())
    }
}

pub fn capture_convergence(
    x: &Tensor3,
    l0: &Tensor3,
    e0: &Tensor3,
    kind: SolverKind,
    cfg: &SolverConfig,
) -> Result<ConvergenceCurves> {
    x.check_same(l0)?;
    x.check_same(e0)?;
    let e_absolute = e0.is_zero();
    let mut k = Vec::new();
    let mut rse_l = Vec::new();
    let mut rse_e = Vec::new();
    let mut err = None;
    let result = solve_observed(kind, x, cfg, &mut |v| {
        let l = match rse(&v.state.l, l0) {
            Ok(r) => r,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        };
        let e = if e_absolute {
            v.state.e.fro()
        } else {
            rse(&v.state.e, e0).unwrap_or(f64::NAN)
        };
        k.push(v.k);
        rse_l.push(l);
        rse_e.push(e);
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(ConvergenceCurves {
        k,
        rse_l,
        rse_e,
        e_absolute,
        result,
    })
}
