//! t-SVD of a low-tubal-rank tensor, its nuclear norm and TNF, and the three
//! proximal maps the solvers are built from.
//!
//! cargo run --example tsvd_and_prox

use trpca::experiments::{gen_low_rank, SyntheticSpec};
use trpca::prox::{ratio_scale, shrink_tensor};
use trpca::rng::Stream;
use trpca::tsvd::{orthogonality_defect, t_svd, t_svt, tnf, tnn, tubal_rank, DEFAULT_RANK_TOL};
use trpca::Dims;

fn main() -> trpca::Result<()> {
    let dims = Dims::new(20, 16, 6)?;
    let a = gen_low_rank(&SyntheticSpec::new(dims, 3, 0.0, 1)?)?;

    let f = t_svd(&a, DEFAULT_RANK_TOL)?;
    let rel = f.reconstruct()?.sub(&a)?.fro() / a.fro();
    println!(
        "tubal rank {} (U is {}, S is {}, V is {})",
        f.rank,
        f.u.dims(),
        f.s.dims(),
        f.v.dims()
    );
    println!(
        "reconstruction error {rel:.2e}, U orthogonality defect {:.2e}",
        orthogonality_defect(&f.u)?
    );
    println!(
        "TNN {:.4}, TNF {:.4}, ||A||_F {:.4}",
        tnn(&a)?,
        tnf(&a)?,
        a.fro()
    );

    let mut rng = Stream::new(2, 0);
    let noisy = a.add(&rng.gaussian_tensor(dims, 0.05))?;
    println!("noisy tubal rank {}", tubal_rank(&noisy, DEFAULT_RANK_TOL)?);
    for tau in [0.1, 1.0, 5.0] {
        let s = t_svt(&noisy, tau)?;
        println!(
            "t-SVT tau={tau}: tubal rank {}, error to A {:.3e}",
            tubal_rank(&s, 1e-8)?,
            s.sub(&a)?.fro() / a.fro()
        );
    }

    let e = shrink_tensor(&noisy, 0.1);
    let nz = e.data().iter().filter(|v| **v != 0.0).count();
    println!("shrink(0.1) keeps {nz} of {} entries", dims.len());

    let (h, sol) = ratio_scale(2.0, 0.5, &a, &mut rng)?;
    println!(
        "ratio prox scales by {:.6}, ||H||_F = {:.4}",
        sol.scale,
        h.fro()
    );
    Ok(())
}
