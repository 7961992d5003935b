//! Lieb-Robinson sweep on the C8 MaxCut annealer: discrepancy against the
//! analytic bound for L = 2..6.

use qa_limits::graphs::{generate_graph, GraphKind, VertexSet};
use qa_limits::hamiltonian::{build_maxcut_annealer, Schedule};
use qa_limits::linalg::pauli_z;
use qa_limits::evolution::LocalOperator;
use qa_limits::locality::{lr_sweep, sweep_csv};

fn main() -> qa_limits::Result<()> {
    let t = 0.5;
    let (g, _) = generate_graph(&GraphKind::Cycle { n: 8 }, 0)?;
    let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(t)?)?;
    let a = VertexSet::new([0], 8)?;
    let z0 = LocalOperator::new(vec![0], pauli_z())?;
    let reports = lr_sweep(&h, &a, &z0, &[2, 3, 4, 5, 6], t, 1e-8)?;
    println!("g = {}, effective degree = {}", h.coupling_bound(), h.max_degree());
    for r in &reports {
        println!(
            "L = {}  discrepancy = {:.3e}  bound = {:.3e}  {}",
            r.l(),
            r.lhs,
            r.rhs,
            if r.vacuous { "vacuous" } else if r.satisfied { "holds" } else { "VIOLATED" }
        );
    }
    print!("{}", sweep_csv(&reports));
    Ok(())
}
