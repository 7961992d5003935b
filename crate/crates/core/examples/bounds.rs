//! Closed-form right-hand sides without any simulation.

use qa_limits::distributions::{concentration_rhs, concentration_time_limit, isoperimetry_time_limit_ii, kappa3};
use qa_limits::locality::lr_bound_rhs;
use qa_limits::maxcut::{ramanujan_rhs, ramanujan_time_limits};
use qa_limits::polymatrix::{smoothing_degree, smoothing_floor, Gamma2Context};

fn main() -> qa_limits::Result<()> {
    for l in 2..=8 {
        println!("LR bound |A| = 1, T = 0.5, g = 1, degree 3, L = {l}: {:.4e}", lr_bound_rhs(1, 1.0, l, 0.5, 1.0, 3)?);
    }
    println!("LR bound (1, 1, 4, 0.5, 1, 2) = {:.4}", lr_bound_rhs(1, 1.0, 4, 0.5, 1.0, 2)?);
    println!("tail bound (c = 1, 0.3, 0.25, n = 1000) = {:.4}", concentration_rhs(1.0, 0.3, 0.25, 1000));
    println!("kappa3(0.5, 2) = {:.4}", kappa3(0.5, 2.0));
    println!("T limits at n = 1000, degree 3: tail {:.3e}, layers {:.3e}",
        concentration_time_limit(0.5, 1.0, 3, 1000), isoperimetry_time_limit_ii(0.5, 1.0, 3, 1000));
    println!("Ramanujan (0.499, 0.001, 6) = {:.4}", ramanujan_rhs(0.499, 0.001, 6)?);
    let (a, b) = ramanujan_time_limits(0.5, 6, 1000);
    println!("Ramanujan T limits: 4Δ {a:.4}, 4(Δ+1) {b:.4}");
    for n1 in [4, 16, 64] {
        let (m, m_real) = smoothing_degree(n1, 0.0);
        println!("n1 = {n1}: m = ceil({m_real:.3}) = {m}, floor on [1/n1, 1] = {:.4}", smoothing_floor(m, n1));
    }
    for n in 1..=4 {
        println!(
            "γ₂ analytic: T_{n} at δ = 1 {:.1}, C_{n} {:.1}",
            Gamma2Context::Chebyshev { n, delta: 1.0 }.analytic(),
            Gamma2Context::Smoothing { n }.analytic()
        );
    }
    Ok(())
}
