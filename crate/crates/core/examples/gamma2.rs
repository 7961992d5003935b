//! γ₂ certificates for Chebyshev and smoothing divided-difference matrices.

use qa_limits::polymatrix::{divided_difference_matrix, gamma2_estimate, Gamma2Context, ScalarFn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> qa_limits::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5u32 {
        let delta = 0.5;
        let lambda: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..=1.0 + delta)).collect();
        let d = divided_difference_matrix(ScalarFn::Chebyshev { n }, &lambda)?;
        let est = gamma2_estimate(&d.to_complex(), Some(Gamma2Context::Chebyshev { n, delta }));
        println!(
            "T_{n}: {:.6} <= γ₂ <= {:.6}   analytic {:.4}",
            est.lower,
            est.upper,
            est.analytic.unwrap_or(f64::NAN)
        );
    }
    for m in 1..=4u32 {
        let lambda: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let d = divided_difference_matrix(ScalarFn::Smoothing { m, eps: 0.25 }, &lambda)?;
        let est = gamma2_estimate(&d.to_complex(), Some(Gamma2Context::Smoothing { n: m }));
        println!("C_{m}: {:.6} <= γ₂ <= {:.6}   analytic {:.1}", est.lower, est.upper, est.analytic.unwrap_or(f64::NAN));
    }
    Ok(())
}
