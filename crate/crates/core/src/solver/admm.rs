use std::time::Instant;

use crate::algebra::SpectralOpts;
use crate::error::{Error, Result};
use crate::prox::{ratio_scale, shrink_tensor};
use crate::rng::{streams, Stream};
use crate::tensor::Tensor3;
use crate::tsvd::{t_svt_with, tnn};

use super::config::{Init, SolverConfig, SolverKind, UpdateOrder};
use super::state::{
    check_convergence, feasibility, lagrangian_with_nuclear, ConvergenceCheck, SolverState,
};
use super::trace::{IterRecord, IterTrace};

/// Read-only view handed to observers after every iteration.
#[derive(Debug)]
pub struct IterView<'a> {
    pub k: usize,
    pub state: &'a SolverState,
    pub record: &'a IterRecord,
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub l_hat: Tensor3,
    pub e_hat: Tensor3,
    pub converged: bool,
    pub iterations: usize,
    pub trace: IterTrace,
    /// Times `H` or `D` had to be redrawn because its norm vanished.
    pub restarts: usize,
    /// Stopping conditions evaluated at the last iteration.
    pub last_check: Option<ConvergenceCheck>,
    /// Iterations spent in the TNN warm start (0 without one).
    pub init_iterations: usize,
}

impl SolverResult {
    /// Bitwise equality of iterates and diagnostics, ignoring wall time.
    pub fn numerics_eq(&self, other: &SolverResult) -> bool {
        self.l_hat == other.l_hat
            && self.e_hat == other.e_hat
            && self.converged == other.converged
            && self.iterations == other.iterations
            && self.trace.numerics_eq(&other.trace)
    }
}

pub fn solve(kind: SolverKind, x: &Tensor3, cfg: &SolverConfig) -> Result<SolverResult> {
    solve_observed(kind, x, cfg, &mut |_| {})
}

pub fn solve_tnn(x: &Tensor3, cfg: &SolverConfig) -> Result<SolverResult> {
    solve(SolverKind::Tnn, x, cfg)
}

pub fn solve_tnf(x: &Tensor3, cfg: &SolverConfig) -> Result<SolverResult> {
    solve(SolverKind::Tnf, x, cfg)
}

pub fn solve_tnf_plus(x: &Tensor3, cfg: &SolverConfig) -> Result<SolverResult> {
    solve(SolverKind::TnfPlus, x, cfg)
}

fn ensure_finite(t: &Tensor3, variable: &'static str, iteration: usize) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite {
            variable,
            iteration,
        })
    }
}

fn initial_point(
    kind: SolverKind,
    x: &Tensor3,
    cfg: &SolverConfig,
) -> Result<(Tensor3, Tensor3, usize)> {
    let zeros = || Tensor3::zeros(x.dims());
    match (&cfg.init, kind) {
        (Init::Given { l, e }, _) => {
            x.check_same(l)?;
            x.check_same(e)?;
            Ok((l.clone(), e.clone(), 0))
        }
        (Init::Zeros, _) | (Init::Tnn, SolverKind::Tnn) => Ok((zeros(), zeros(), 0)),
        (Init::Tnn, _) => {
            let warm = solve(SolverKind::Tnn, x, &cfg.warm_start(x.dims()))?;
            Ok((warm.l_hat, warm.e_hat, warm.iterations))
        }
    }
}

/// Runs the ADMM loop for `kind`, calling `observer` after every iteration.
pub fn solve_observed(
    kind: SolverKind,
    x: &Tensor3,
    cfg: &SolverConfig,
    observer: &mut dyn FnMut(&IterView),
) -> Result<SolverResult> {
    cfg.validate()?;
    ensure_finite(x, "X", 0)?;
    let dims = x.dims();
    let (l0, e0, init_iterations) = initial_point(kind, x, cfg)?;
    let zeros = || Tensor3::zeros(dims);
    let ratio = kind != SolverKind::Tnn;
    let plus = kind == SolverKind::TnfPlus;

    let mut state = SolverState {
        h: ratio.then(|| l0.clone()),
        d: plus.then(|| e0.clone()),
        y: ratio.then(zeros),
        u: plus.then(zeros),
        z: zeros(),
        l: l0,
        e: e0,
        mu1: cfg.mu1,
        mu2: cfg.mu2,
        mu3: cfg.mu3,
        k: 0,
    };
    let mut rng = Stream::new(cfg.seed, streams::SOLVER_FALLBACK);
    let opts = SpectralOpts::default();
    let lambda = cfg.lambda;
    let mut nuclear = if ratio { tnn(&state.l)? } else { 0.0 };
    let mut trace = IterTrace::default();
    let mut restarts = 0;
    let mut converged = false;
    let mut last_check = None;
    let start = Instant::now();

    while state.k < cfg.k_max {
        let prev = state.clone();
        let (mu1, mu2, mu3) = (state.mu1, state.mu2, state.mu3);
        let it = state.k + 1;

        if !ratio {
            let a = x.sub(&state.e)?.sub(&state.z.scale(1.0 / mu2))?;
            let (l, nn) = t_svt_with(&a, 1.0 / mu2, opts)?;
            nuclear = nn;
            let e_arg = x.sub(&l)?.sub(&state.z.scale(1.0 / mu2))?;
            state.e = shrink_tensor(&e_arg, lambda / mu2);
            state.l = l;
        } else {
            // L-step
            let mut h = state.h.take().expect("ratio solvers carry H");
            if h.fro() == 0.0 {
                restarts += 1;
                h = ratio_scale(nuclear, mu1, &h, &mut rng)?.0;
            }
            let hn = h.fro();
            let tau = if hn > 0.0 {
                1.0 / ((mu1 + mu2) * hn)
            } else {
                f64::INFINITY
            };
            let y = state.y.as_ref().expect("ratio solvers carry Y");
            let mut a = h.scale(mu1);
            a.axpy(mu2, &x.sub(&state.e)?)?;
            a.axpy(-1.0, y)?;
            a.axpy(-1.0, &state.z)?;
            let a = a.scale(1.0 / (mu1 + mu2));
            let (l, nn) = t_svt_with(&a, tau, opts)?;
            nuclear = nn;
            state.l = l;

            let h_step = |state: &mut SolverState, rng: &mut Stream| -> Result<()> {
                let y = state.y.as_ref().expect("Y");
                let mut k = state.l.clone();
                k.axpy(1.0 / mu1, y)?;
                state.h = Some(ratio_scale(nuclear, mu1, &k, rng)?.0);
                Ok(())
            };
            let e_step =
                |state: &mut SolverState, rng: &mut Stream, restarts: &mut usize| -> Result<()> {
                    if !plus {
                        let e_arg = x.sub(&state.l)?.sub(&state.z.scale(1.0 / mu2))?;
                        state.e = shrink_tensor(&e_arg, lambda / mu2);
                        return Ok(());
                    }
                    let mut d = state.d.take().expect("TNF+ carries D");
                    if d.fro() == 0.0 {
                        *restarts += 1;
                        d = ratio_scale(lambda * prev.e.l1(), mu3, &d, rng)?.0;
                    }
                    let dn = d.fro();
                    let thr = if dn > 0.0 {
                        lambda / ((mu2 + mu3) * dn)
                    } else {
                        f64::INFINITY
                    };
                    let u = state.u.as_ref().expect("TNF+ carries U");
                    let mut arg = x.sub(&state.l)?.scale(mu2);
                    arg.axpy(mu3, &d)?;
                    arg.axpy(-1.0, &state.z)?;
                    arg.axpy(-1.0, u)?;
                    let e = shrink_tensor(&arg.scale(1.0 / (mu2 + mu3)), thr);
                    let beta = lambda * e.l1();
                    let mut kd = e.clone();
                    kd.axpy(1.0 / mu3, u)?;
                    state.d = Some(ratio_scale(beta, mu3, &kd, rng)?.0);
                    state.e = e;
                    Ok(())
                };
            match cfg.order {
                UpdateOrder::HThenE => {
                    h_step(&mut state, &mut rng)?;
                    e_step(&mut state, &mut rng, &mut restarts)?;
                }
                UpdateOrder::EThenH => {
                    e_step(&mut state, &mut rng, &mut restarts)?;
                    h_step(&mut state, &mut rng)?;
                }
            }

            // dual ascent on L = H and E = D
            let y = state.y.as_mut().expect("Y");
            y.axpy(mu1, &state.l)?;
            y.axpy(-mu1, state.h.as_ref().expect("H"))?;
            if plus {
                let u = state.u.as_mut().expect("U");
                u.axpy(mu3, &state.e)?;
                u.axpy(-mu3, state.d.as_ref().expect("D"))?;
            }
        }
        let mut r = state.l.add(&state.e)?;
        r.axpy(-1.0, x)?;
        state.z.axpy(mu2, &r)?;
        state.k = it;

        for (name, t) in [
            ("L", Some(&state.l)),
            ("E", Some(&state.e)),
            ("Z", Some(&state.z)),
            ("H", state.h.as_ref()),
            ("Y", state.y.as_ref()),
            ("D", state.d.as_ref()),
            ("U", state.u.as_ref()),
        ] {
            if let Some(t) = t {
                ensure_finite(t, name, it)?;
            }
        }

        let check = check_convergence(&state, &prev, x, cfg.eps)?;
        let ln = state.l.fro();
        let record = IterRecord {
            k: it,
            lagrangian: lagrangian_with_nuclear(&state, x, lambda, nuclear).ok(),
            res_feas: feasibility(&state, x)?,
            res_lh: match &state.h {
                Some(h) => Some(state.l.max_abs_diff(h)?),
                None => None,
            },
            res_ed: match &state.d {
                Some(d) => Some(state.e.max_abs_diff(d)?),
                None => None,
            },
            d_l: check.get(super::Condition::DeltaL).unwrap_or(0.0),
            d_h: check.get(super::Condition::DeltaH),
            d_e: check.get(super::Condition::DeltaE).unwrap_or(0.0),
            d_d: check.get(super::Condition::DeltaD),
            d_y: check.get(super::Condition::DeltaY),
            d_z: check.get(super::Condition::DeltaZ).unwrap_or(0.0),
            d_u: check.get(super::Condition::DeltaU),
            tnf_l: (ln > 0.0).then(|| nuclear / ln),
            l1_e: state.e.l1(),
            ms: start.elapsed().as_secs_f64() * 1e3,
        };
        observer(&IterView {
            k: it,
            state: &state,
            record: &record,
        });
        trace.records.push(record);
        converged = check.converged;
        last_check = Some(check);
        if converged {
            break;
        }

        state.mu1 = (state.mu1 * cfg.mu_growth).min(cfg.mu_cap);
        state.mu2 = (state.mu2 * cfg.mu_growth).min(cfg.mu_cap);
        state.mu3 = (state.mu3 * cfg.mu_growth).min(cfg.mu_cap);
    }

    Ok(SolverResult {
        iterations: state.k,
        l_hat: state.l,
        e_hat: state.e,
        converged,
        trace,
        restarts,
        last_check,
        init_iterations,
    })
}
