//! Per-iteration recovery errors of TNF and TNF+ on a 40x40x30 tensor of
//! tubal rank 3 with 20% of the entries flipped to +-1.
//!
//! cargo run --release --example convergence [-- out_dir]

use std::fs::File;
use std::path::PathBuf;
use std::time::Instant;

use trpca::experiments::{capture_convergence, generate, SyntheticSpec};
use trpca::solver::{SolverConfig, SolverKind};
use trpca::Dims;

fn main() -> trpca::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let dims = Dims::new(40, 40, 30)?;
    let data = generate(&SyntheticSpec::with_sparsity(dims, 3, 0.2, 2024)?)?;

    for kind in [SolverKind::Tnf, SolverKind::TnfPlus] {
        let cfg = SolverConfig::synthetic(kind, dims);
        let t = Instant::now();
        let curves = capture_convergence(&data.x, &data.l0, &data.e0, kind, &cfg)?;
        let n = curves.k.len();
        println!(
            "{kind}: {} iterations (+{} warm start), converged {}, RSE(L) {:.3e}, RSE(E) {:.3e}, {:.1}s",
            n,
            curves.result.init_iterations,
            curves.result.converged,
            curves.rse_l[n - 1],
            curves.rse_e[n - 1],
            t.elapsed().as_secs_f64()
        );
        for i in (0..n).step_by((n / 10).max(1)) {
            println!(
                "  k={:4}  rse_L={:.3e}  rse_E={:.3e}",
                curves.k[i], curves.rse_l[i], curves.rse_e[i]
            );
        }
        if let Some(dir) = &out {
            std::fs::create_dir_all(dir)?;
            let name = format!("convergence_{}.csv", kind.name().replace('+', "plus"));
            curves.write_csv(File::create(dir.join(name))?)?;
        }
    }
    Ok(())
}
