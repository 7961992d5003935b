//! Annealed expected cut on a few graphs next to the exact optimum, the greedy
//! baseline and the random-cut line.

use qa_limits::graphs::{generate_graph, GraphKind};
use qa_limits::hamiltonian::{build_maxcut_annealer, Schedule};
use qa_limits::maxcut::{brute_force_maxcut, flip_commutator_norm, greedy_cut, qa_expected_cut, ramanujan_rhs, GW_RATIO};

fn main() -> qa_limits::Result<()> {
    let ramp = Schedule::linear_ramp(1.0)?;
    let graphs = [
        GraphKind::Cycle { n: 6 },
        GraphKind::Cycle { n: 7 },
        GraphKind::CompleteBipartite { left: 3, right: 3 },
        GraphKind::RandomRegular { n: 10, degree: 3, simple: true },
    ];
    for kind in &graphs {
        let (g, _) = generate_graph(kind, 5)?;
        let (cut_star, _) = brute_force_maxcut(&g)?;
        let (greedy, _) = greedy_cut(&g);
        println!("{kind:?}: |E| = {}, Cut* = {cut_star}, greedy = {greedy}", g.n_edges());
        for t in [0.0, 0.5, 2.0] {
            let run = qa_expected_cut(&g, &ramp, t, 1e-8)?;
            println!(
                "  T = {t:<4} E[cut] = {:.6}  ratio = {:.4}  |p(x) - p(x̄)| <= {:.1e}",
                run.expected_cut,
                run.expected_cut / cut_star as f64,
                run.flip_asymmetry()
            );
        }
        let h = build_maxcut_annealer(&g, &ramp)?;
        println!("  max ‖[H(t), X^n]‖ over 32 times = {:.1e}", flip_commutator_norm(&h, 32)?);
    }
    let (k2, _) = generate_graph(&GraphKind::Path { n: 2 }, 0)?;
    println!("K2, T = 20: E[cut] = {:.6}", qa_expected_cut(&k2, &ramp, 20.0, 1e-8)?.expected_cut);
    for delta in [3, 6, 10] {
        let rhs = ramanujan_rhs(0.499, 0.001, delta)?;
        println!("Ramanujan ratio bound, degree {delta}: {rhs:.4} (GW {GW_RATIO})");
    }
    Ok(())
}
