mod common;

use common::*;
use proptest::prelude::*;
use trpca::algebra::{conj_transpose, identity_tensor, t_product};
use trpca::experiments::{gen_low_rank, SyntheticSpec};
use trpca::fft::fft_mode3;
use trpca::prox::{ratio_scale, ratio_scale_factor, shrink, shrink_tensor};
use trpca::rng::Stream;
use trpca::svd::complex_svd;
use trpca::tsvd::{
    incoherence, orthogonality_defect, t_svd, t_svt, tnf, tnn, tubal_rank, DEFAULT_RANK_TOL,
};
use trpca::{Error, Tensor3};

fn low_rank(n1: usize, n2: usize, n3: usize, r: usize, seed: u64) -> Tensor3 {
    gen_low_rank(&SyntheticSpec::new(dims(n1, n2, n3), r, 0.0, seed).unwrap()).unwrap()
}

fn check_factors(a: &Tensor3) {
    let f = t_svd(a, DEFAULT_RANK_TOL).unwrap();
    let rec = f.reconstruct().unwrap();
    assert!(
        rel_err(&rec, a) <= 1e-8,
        "reconstruction {}",
        rel_err(&rec, a)
    );
    assert!(orthogonality_defect(&f.u).unwrap() <= 1e-8);
    assert!(orthogonality_defect(&f.v).unwrap() <= 1e-8);

    // S is f-diagonal: every Fourier slice is diagonal
    let fs = fft_mode3(&f.s);
    for k in 0..a.dims().n3 {
        for i in 0..f.rank {
            for j in 0..f.rank {
                if i != j {
                    assert!(fs.get(i, j, k).norm() < 1e-10);
                }
            }
        }
    }
    for s in &f.sigma {
        assert!(s.iter().all(|v| *v >= 0.0));
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn t_svd_random_tensors() {
    for (n1, n2, n3, seed) in [
        (8, 6, 5, 1),
        (32, 24, 8, 2),
        (24, 32, 8, 3),
        (5, 5, 1, 4),
        (3, 7, 4, 5),
    ] {
        check_factors(&gaussian(dims(n1, n2, n3), seed));
    }
}

#[test]
fn t_svd_low_rank_and_identity() {
    let a = low_rank(10, 8, 4, 1, 3);
    let f = t_svd(&a, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(f.rank, 1);
    check_factors(&a);

    let i = identity_tensor(4, 3).unwrap();
    let f = t_svd(&i, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(f.rank, 4);
    for s in &f.sigma {
        for v in s {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
    assert!(matches!(
        t_svd(&Tensor3::zeros(dims(2, 2, 2)), DEFAULT_RANK_TOL),
        Err(Error::ZeroTensor)
    ));
}

#[test]
fn tubal_rank_examples() {
    assert_eq!(
        tubal_rank(&Tensor3::zeros(dims(3, 3, 3)), DEFAULT_RANK_TOL).unwrap(),
        0
    );
    assert_eq!(
        tubal_rank(&identity_tensor(5, 4).unwrap(), DEFAULT_RANK_TOL).unwrap(),
        5
    );
    assert_eq!(
        tubal_rank(&low_rank(40, 40, 30, 3, 7), DEFAULT_RANK_TOL).unwrap(),
        3
    );
    assert_eq!(
        tubal_rank(&low_rank(6, 9, 3, 6, 7), DEFAULT_RANK_TOL).unwrap(),
        6
    );
}

#[test]
fn tnn_matches_block_diagonal_oracle() {
    for (n1, n2, n3, seed) in [(5, 5, 4, 1), (6, 3, 5, 2), (2, 7, 6, 3), (4, 4, 1, 4)] {
        let a = gaussian(dims(n1, n2, n3), seed);
        let want = tnn_oracle(&a);
        assert!((tnn(&a).unwrap() - want).abs() <= 1e-8 * want);
    }
    assert_eq!(tnn(&Tensor3::zeros(dims(2, 3, 4))).unwrap(), 0.0);
}

#[test]
fn tnn_single_slice_is_matrix_nuclear_norm() {
    let a = gaussian(dims(5, 3, 1), 12);
    let m = nalgebra::DMatrix::from_fn(5, 3, |i, j| a.get(i, j, 0));
    let want: f64 = m.svd(false, false).singular_values.iter().sum();
    assert!((tnn(&a).unwrap() - want).abs() < 1e-10 * want);
}

#[test]
fn tnf_examples() {
    let n3 = 6;
    let spike = Tensor3::from_fn(
        dims(3, 4, n3),
        |i, j, _| if (i, j) == (1, 2) { 1.0 } else { 0.0 },
    );
    assert!((tnf(&spike).unwrap() - 1.0 / (n3 as f64).sqrt()).abs() < 1e-12);

    let a = gaussian(dims(6, 4, 3), 5);
    assert!((tnf(&a.scale(7.3)).unwrap() - tnf(&a).unwrap()).abs() < 1e-12);
    let v = tnf(&a).unwrap();
    assert!(v >= 1.0 / 3f64.sqrt() && v <= 4f64.sqrt(), "{v}");
    assert!(matches!(
        tnf(&Tensor3::zeros(dims(2, 2, 2))),
        Err(Error::ZeroTensor)
    ));
}

#[test]
fn svt_extremes() {
    let a = gaussian(dims(5, 4, 3), 2);
    assert!(t_svt(&a, 0.0).unwrap().max_abs_diff(&a).unwrap() <= 1e-10);
    let smax = t_svd(&a, 0.0)
        .unwrap()
        .sigma
        .iter()
        .flatten()
        .cloned()
        .fold(0.0, f64::max);
    assert!(t_svt(&a, smax).unwrap().is_zero());
    for (v, tau) in [(2.5, 1.0), (-0.3, 1.0), (-4.0, 0.5), (0.0, 0.1)] {
        let t = Tensor3::from_vec(dims(1, 1, 1), vec![v]).unwrap();
        assert_eq!(t_svt(&t, tau).unwrap().data()[0], shrink(v, tau));
    }
    assert!(t_svt(&a, -1.0).is_err());
}

#[test]
fn svt_is_prox_optimal_under_perturbation() {
    let mut rng = Stream::new(99, 0);
    for inst in 0..10u64 {
        let (n1, n2, n3) = (
            2 + (inst as usize % 7),
            3 + (inst as usize % 6),
            1 + (inst as usize % 4),
        );
        let a = gaussian(dims(n1, n2, n3), 500 + inst);
        let tau = if inst % 2 == 0 { 0.1 } else { 1.0 };
        let x = t_svt(&a, tau).unwrap();
        let fx = svt_objective(&x, &a, tau);
        for _ in 0..200 {
            let d = rng.gaussian_tensor(a.dims(), 1.0);
            let d = d.scale(1e-3 / d.fro());
            let fy = svt_objective(&x.add(&d).unwrap(), &a, tau);
            assert!(
                fx <= fy + 1e-12 * (1.0 + fx),
                "instance {inst}: {fx} > {fy}"
            );
        }
    }
}

#[test]
fn incoherence_examples() {
    let r = incoherence(&identity_tensor(4, 3).unwrap(), DEFAULT_RANK_TOL).unwrap();
    assert_eq!(r.r, 4);
    assert!((r.mu_u - r.mu_v).abs() < 1e-9);

    let d = dims(5, 4, 3);
    let mut spike = Tensor3::zeros(d);
    spike.data_mut()[0] = 1.0;
    let spike_mu = incoherence(&spike, DEFAULT_RANK_TOL).unwrap().mu_uv;
    for s in 0..100 {
        let p = gaussian(dims(5, 1, 3), 1000 + s);
        let q = gaussian(dims(1, 4, 3), 2000 + s);
        let slab = t_product(&p, &q).unwrap();
        let mu = incoherence(&slab, DEFAULT_RANK_TOL).unwrap().mu_uv;
        assert!(mu <= spike_mu + 1e-9, "{mu} > {spike_mu}");
    }

    let g = incoherence(&low_rank(40, 40, 30, 3, 1), DEFAULT_RANK_TOL).unwrap();
    assert_eq!(g.r, 3);
    for v in [g.mu_u, g.mu_v, g.mu_uv] {
        assert!(v.is_finite() && v >= 0.0);
    }
    assert!(incoherence(&Tensor3::zeros(d), DEFAULT_RANK_TOL).is_err());
}

#[test]
fn conj_transpose_of_factors_is_consistent() {
    let a = gaussian(dims(4, 3, 5), 8);
    let f = t_svd(&a, DEFAULT_RANK_TOL).unwrap();
    // A^* = V * S^* * U^*
    let at = t_product(
        &t_product(&f.v, &conj_transpose(&f.s)).unwrap(),
        &conj_transpose(&f.u),
    )
    .unwrap();
    assert!(rel_err(&at, &conj_transpose(&a)) <= 1e-8);
}

#[test]
fn complex_svd_rejects_nan() {
    let m = trpca::svd::CMat::from_fn(
        2,
        2,
        |i, _| if i == 0 { f64::NAN.into() } else { 1.0.into() },
    );
    assert!(complex_svd(&m).is_err());
}

// ---- prox ----

#[test]
fn ratio_scale_matches_golden_section_fixed() {
    let want = golden_oracle(1.0, 1.0, 2.0);
    let got = ratio_scale_factor(1.0 / 8.0);
    assert!((got - want).abs() <= 1e-6, "{got} vs {want}");
}

#[test]
fn ratio_scale_matches_golden_section_random() {
    let mut s = Stream::new(31, 0);
    let log_uniform = |s: &mut Stream| 10f64.powf(-4.0 + 6.0 * s.uniform());
    for _ in 0..100 {
        let (rho, mu, k) = (
            log_uniform(&mut s),
            log_uniform(&mut s),
            log_uniform(&mut s),
        );
        let iota = ratio_scale_factor(rho / (mu * k * k * k));
        let a = golden_oracle(rho, mu, k);
        assert!(
            (iota - a).abs() <= 1e-6 * a.max(1.0),
            "rho {rho} mu {mu} k {k}: {iota} vs {a}"
        );
        assert!(iota >= 1.0);

        // global optimality against a dense grid
        let gi = ratio_objective(iota, rho, mu, k);
        for p in 0..10_000 {
            let x = 1e-3 + (10.0 - 1e-3) * p as f64 / 9_999.0;
            assert!(gi <= ratio_objective(x, rho, mu, k) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn ratio_scale_tensor_form() {
    let k = gaussian(dims(3, 4, 2), 4).scale(2.0 / gaussian(dims(3, 4, 2), 4).fro());
    let mut rng = Stream::new(0, 0);
    let (h, sol) = ratio_scale(1.0, 1.0, &k, &mut rng).unwrap();
    assert!(!sol.fallback_used);
    assert!(rel_err(&h, &k.scale(golden_oracle(1.0, 1.0, 2.0))) <= 1e-6);

    let (z, sol) = ratio_scale(8.0, 1.0, &Tensor3::zeros(dims(3, 3, 3)), &mut rng).unwrap();
    assert!(sol.fallback_used);
    assert!((z.fro() - 2.0).abs() < 1e-12);
    assert!(matches!(
        ratio_scale(1.0, 0.0, &k, &mut rng),
        Err(Error::InvalidParam(_))
    ));
    assert!(matches!(
        ratio_scale(-1.0, 1.0, &k, &mut rng),
        Err(Error::InvalidParam(_))
    ));
}

#[test]
fn shrink_exact() {
    assert_eq!(shrink(0.7, 1.0), 0.0);
    assert_eq!(shrink(-3.0, 1.0), -2.0);
    assert_eq!(shrink(1.25, 0.0), 1.25);
    let t = Tensor3::from_vec(dims(1, 1, 4), vec![-2.0, -0.5, 0.5, 3.0]).unwrap();
    assert_eq!(shrink_tensor(&t, 1.0).data(), &[-1.0, 0.0, 0.0, 2.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn prop_shrink_formula(v in -1e6f64..1e6, rho in 0f64..1e3) {
        let want = if v.abs() <= rho { 0.0 } else if v > 0.0 { v - rho } else { v + rho };
        prop_assert_eq!(shrink(v, rho), want);
    }

    #[test]
    fn prop_discriminant_safe(e in 0f64..1e12) {
        let iota = ratio_scale_factor(e);
        prop_assert!(iota.is_finite() && iota >= 1.0);
        // root of a^3 - a^2 - e = 0
        prop_assert!((iota.powi(3) - iota.powi(2) - e).abs() <= 1e-9 * (1.0 + e));
    }

    #[test]
    fn prop_tnf_scale_invariant(seed in any::<u64>(), exp in -3i32..=3) {
        let a = gaussian(dims(4, 3, 3), seed);
        let c = 10f64.powi(exp);
        prop_assert!((tnf(&a.scale(c)).unwrap() - tnf(&a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn prop_svt_never_raises_rank(seed in any::<u64>(), tau in 0f64..3.0, r in 1usize..=4) {
        let a = low_rank(6, 5, 3, r, seed);
        let before = tubal_rank(&a, 1e-8).unwrap();
        let after = tubal_rank(&t_svt(&a, tau).unwrap(), 1e-8).unwrap();
        prop_assert!(after <= before);
    }

    #[test]
    fn prop_ratio_stationarity(seed in any::<u64>(), rho in 1e-3f64..1e2, mu in 1e-3f64..1e2) {
        let k = gaussian(dims(3, 2, 2), seed);
        let mut rng = Stream::new(seed, 0);
        let (h, _) = ratio_scale(rho, mu, &k, &mut rng).unwrap();
        let hn = h.fro();
        let grad = h.scale(-rho / hn.powi(3)).add(&h.sub(&k).unwrap().scale(mu)).unwrap();
        prop_assert!(grad.fro() <= 1e-8 * mu * k.fro());
    }
}
