//! The t-product and its building blocks: mode-3 FFT, conjugate transpose,
//! identity tensor, and the block-circulant reference it must agree with.
//!
//! cargo run --example tensor_algebra

use trpca::algebra::{conj_transpose, identity_tensor, t_product, t_product_oracle};
use trpca::fft::fft_mode3;
use trpca::rng::Stream;
use trpca::Dims;

fn main() -> trpca::Result<()> {
    let mut rng = Stream::new(7, 0);
    let a = rng.gaussian_tensor(Dims::new(4, 3, 5)?, 1.0);
    let b = rng.gaussian_tensor(Dims::new(3, 2, 5)?, 1.0);

    let c = t_product(&a, &b)?;
    let reference = t_product_oracle(&a, &b)?;
    println!(
        "A*B is {}, max |fft - bcirc| = {:.2e}",
        c.dims(),
        c.max_abs_diff(&reference)?
    );

    let i = identity_tensor(4, 5)?;
    println!(
        "max |I*A - A| = {:.2e}",
        t_product(&i, &a)?.max_abs_diff(&a)?
    );

    // (A*B)^* = B^* * A^*
    let lhs = conj_transpose(&c);
    let rhs = t_product(&conj_transpose(&b), &conj_transpose(&a))?;
    println!(
        "max |(A*B)^* - B^* * A^*| = {:.2e}",
        lhs.max_abs_diff(&rhs)?
    );

    // ||A||_F^2 = (1/n3) sum_k ||fft(A)_k||_F^2
    let fa = fft_mode3(&a);
    let spectral: f64 = fa.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / 5.0;
    println!("Parseval: {:.12} vs {:.12}", a.fro_sq(), spectral);
    Ok(())
}
