//! The smoothing operator K = U C_m(Γ₀) U† and its sandwich between multiples
//! of I - P after a MaxCut anneal.

use qa_limits::evolution::propagate_unitary;
use qa_limits::graphs::{generate_graph, GraphKind};
use qa_limits::hamiltonian::{build_maxcut_annealer, Schedule};
use qa_limits::linalg::c;
use qa_limits::polymatrix::build_smoothing_operator;

fn main() -> qa_limits::Result<()> {
    let plus = [c(0.5f64.sqrt(), 0.0), c(0.5f64.sqrt(), 0.0)];
    for n1 in [4, 6, 8] {
        let (g, _) = generate_graph(&GraphKind::Cycle { n: n1 }, 0)?;
        for t in [0.3, 0.6] {
            let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(t)?)?;
            let u = propagate_unitary(&h, t, 1e-10)?;
            for theta in [0.0, 0.25] {
                let s = build_smoothing_operator(&vec![plus; n1], n1, theta, &u.matrix)?.summary();
                println!(
                    "n1 = {n1} T = {t} θ = {theta}: m = {} ({}), margins {:.2e} / {:.2e}, spec K ⊂ [{:.2e}, {:.4}]",
                    s.m_degree, s.records["m_rounding"], s.lower_margin, s.upper_margin, s.k_min, s.k_max
                );
            }
        }
    }
    Ok(())
}
