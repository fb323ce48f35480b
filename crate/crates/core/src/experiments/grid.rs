use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::solver::{solve, SolverConfig, SolverKind};
use crate::tensor::Dims;

use super::metrics::rse;
use super::synthetic::{generate, SyntheticSpec};

/// A trial counts as a success below this RSE of the low-rank part.
pub const SUCCESS_RSE: f64 = 1e-3;

pub const GRID_HEADER: &str = "rank,sparsity,success_rate,mean_rse,mean_iters";

/// A trial that ended in an error and was counted as unsuccessful.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialFailure {
    pub rank: usize,
    pub sparsity: f64,
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

/// Aggregated outcome of one (rank, sparsity) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub rank: usize,
    pub sparsity: f64,
    pub successes: usize,
    pub trials: usize,
    /// Mean over trials that produced an estimate; NaN if none did.
    pub mean_rse: f64,
    pub mean_iters: f64,
    pub failures: Vec<TrialFailure>,
}

impl CellSummary {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

/// Success rates over a rank x sparsity grid. Matrices are indexed
/// `[rank][sparsity]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessGrid {
    pub ranks: Vec<usize>,
    pub sparsities: Vec<f64>,
    pub trials: usize,
    pub success_rate: Vec<Vec<f64>>,
    pub mean_rse: Vec<Vec<f64>>,
    pub mean_iters: Vec<Vec<f64>>,
    pub failures: Vec<TrialFailure>,
}

impl SuccessGrid {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{GRID_HEADER}")?;
        for (i, r) in self.ranks.iter().enumerate() {
            for (j, s) in self.sparsities.iter().enumerate() {
                writeln!(
                    w,
                    "{r},{s},{},{:e},{}",
                    self.success_rate[i][j], self.mean_rse[i][j], self.mean_iters[i][j]
                )?;
            }
        }
        Ok(())
    }
}

/// What to sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dims: Dims,
    pub ranks: Vec<usize>,
    /// Corruption rates `2 * gamma`.
    pub sparsities: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.ranks.is_empty() || self.sparsities.is_empty() {
            return Err(Error::InvalidSpec("empty rank or sparsity list".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidSpec("trials must be >= 1".into()));
        }
        for &r in &self.ranks {
            for &s in &self.sparsities {
                SyntheticSpec::with_sparsity(self.dims, r, s, 0)?;
            }
        }
        Ok(())
    }
}

enum Trial {
    Solved { rse: f64, iters: usize },
    Failed(TrialFailure),
}

fn run_trial(
    spec: &GridSpec,
    (i, j, t): (usize, usize, usize),
    kind: SolverKind,
    cfg: &SolverConfig,
) -> Result<Trial> {
    let seed = derive_seed(spec.master_seed, &[i as u64, j as u64, t as u64]);
    let (rank, sparsity) = (spec.ranks[i], spec.sparsities[j]);
    let data = generate(&SyntheticSpec::with_sparsity(
        spec.dims, rank, sparsity, seed,
    )?)?;
    let cfg = SolverConfig {
        seed,
        ..cfg.clone()
    };
    match solve(kind, &data.x, &cfg) {
        Ok(res) => Ok(Trial::Solved {
            rse: rse(&res.l_hat, &data.l0)?,
            iters: res.iterations,
        }),
        Err(e @ Error::NonFinite { .. }) => Ok(Trial::Failed(TrialFailure {
            rank,
            sparsity,
            trial: t,
            seed,
            message: e.to_string(),
        })),
        Err(e) => Err(e),
    }
}

fn run_cell(
    spec: &GridSpec,
    (i, j): (usize, usize),
    kind: SolverKind,
    cfg: &SolverConfig,
) -> Result<CellSummary> {
    let outcomes = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, (i, j, t), kind, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut successes = 0;
    let (mut rse_sum, mut iter_sum, mut solved) = (0.0, 0.0, 0usize);
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Trial::Solved { rse, iters } => {
                if rse < SUCCESS_RSE {
                    successes += 1;
                }
                rse_sum += rse;
                iter_sum += iters as f64;
                solved += 1;
            }
            Trial::Failed(f) => failures.push(f),
        }
    }
    let mean = |s: f64| {
        if solved > 0 {
            s / solved as f64
        } else {
            f64::NAN
        }
    };
    Ok(CellSummary {
        rank: spec.ranks[i],
        sparsity: spec.sparsities[j],
        successes,
        trials: spec.trials,
        mean_rse: mean(rse_sum),
        mean_iters: mean(iter_sum),
        failures,
    })
}

pub fn run_grid(spec: &GridSpec, kind: SolverKind, cfg: &SolverConfig) -> Result<SuccessGrid> {
    run_grid_with_progress(spec, kind, cfg, |_| {})
}

/// [`run_grid`] calling `progress` as each cell finishes (in completion
/// order, which varies between runs; the grid itself does not).
pub fn run_grid_with_progress<F>(
    spec: &GridSpec,
    kind: SolverKind,
    cfg: &SolverConfig,
    progress: F,
) -> Result<SuccessGrid>
where
    F: Fn(&CellSummary) + Sync,
{
    spec.validate()?;
    cfg.validate()?;
    let (nr, ns) = (spec.ranks.len(), spec.sparsities.len());
    let cells = (0..nr * ns)
        .into_par_iter()
        .map(|c| {
            let cell = run_cell(spec, (c / ns, c % ns), kind, cfg)?;
            progress(&cell);
            Ok(cell)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut grid = SuccessGrid {
        ranks: spec.ranks.clone(),
        sparsities: spec.sparsities.clone(),
        trials: spec.trials,
        success_rate: vec![vec![0.0; ns]; nr],
        mean_rse: vec![vec![0.0; ns]; nr],
        mean_iters: vec![vec![0.0; ns]; nr],
        failures: Vec::new(),
    };
    for (c, cell) in cells.into_iter().enumerate() {
        let (i, j) = (c / ns, c % ns);
        grid.success_rate[i][j] = cell.success_rate();
        grid.mean_rse[i][j] = cell.mean_rse;
        grid.mean_iters[i][j] = cell.mean_iters;
        grid.failures.extend(cell.failures);
    }
    Ok(grid)
}
