//! Success rates over a (tubal rank, corruption rate) grid.
//!
//! cargo run --release --example phase_transition -- [tnf|tnf+|tnn] [trials] [out.csv]
//!
//! Defaults to a 3x3 grid of corner values with 3 trials; pass `full` as the fourth
//! argument for the whole 10x10 grid (hours of CPU time).

use std::fs::File;
use std::time::Instant;

use trpca::experiments::{run_grid_with_progress, GridSpec};
use trpca::solver::{SolverConfig, SolverKind};
use trpca::Dims;

fn main() -> trpca::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: SolverKind = args.first().map_or(Ok(SolverKind::Tnf), |s| s.parse())?;
    let trials = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let full = args.get(3).is_some_and(|s| s == "full");
    let dims = Dims::new(40, 40, 30)?;

    let (ranks, sparsities) = if full {
        (
            (1..=19).step_by(2).collect(),
            (1..=10).map(|i| 0.05 * i as f64).collect(),
        )
    } else {
        (vec![1, 3, 19], vec![0.05, 0.1, 0.5])
    };
    let spec = GridSpec {
        dims,
        ranks,
        sparsities,
        trials,
        master_seed: 1,
    };
    let cfg = SolverConfig::synthetic(kind, dims);
    let t = Instant::now();
    let grid = run_grid_with_progress(&spec, kind, &cfg, |c| {
        eprintln!(
            "rank {:2} sparsity {:.2}: {}/{} (mean RSE {:.2e}, {:.0} iterations)",
            c.rank, c.sparsity, c.successes, c.trials, c.mean_rse, c.mean_iters
        );
    })?;
    println!(
        "{kind}, {trials} trials per cell, {:.0}s",
        t.elapsed().as_secs_f64()
    );
    print!("rank \\ 2gamma");
    for s in &grid.sparsities {
        print!(" {s:5.2}");
    }
    println!();
    for (i, r) in grid.ranks.iter().enumerate() {
        print!("{r:13}");
        for v in &grid.success_rate[i] {
            print!(" {v:5.2}");
        }
        println!();
    }
    if let Some(path) = args.get(2) {
        grid.write_csv(File::create(path)?)?;
    }
    Ok(())
}
