//! Random 3-regular bipartite ensemble: cycle census, R_L fraction and the
//! tree-local bracket around each full simulation.

use qa_limits::hamiltonian::Schedule;
use qa_limits::maxcut::bipartite_ensemble_report;

fn main() -> qa_limits::Result<()> {
    let summary = bipartite_ensemble_report(3, 12, 20, &Schedule::linear_ramp(1.0)?, 0.4, 2, 1e-8, 11, 14)?;
    println!(
        "E_tree = {:.6}, eps(L) = {:.3e}, mean E[cut] = {:.4}, mean short cycles = {:.2}, R_L fraction = {:.3}",
        summary.e_tree, summary.epsilon, summary.mean_expected_cut, summary.mean_short_cycles, summary.r_l_fraction
    );
    println!("Cut* = {}, random cut = {}", summary.cut_star, summary.random_cut);
    println!("all full runs inside the bracket: {}", summary.all_within_bracket());
    print!("{}", summary.to_csv());
    Ok(())
}
