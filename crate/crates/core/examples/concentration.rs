//! Exact weight statistics of a short anneal on C10 against the variance and
//! tail bounds, with the GHZ distribution as a contrast.

use qa_limits::distributions::{concentration_report, ghz_contrast_report, hamming_stats, variance_report, Premise};
use qa_limits::graphs::{generate_graph, GraphKind};
use qa_limits::hamiltonian::Schedule;
use qa_limits::maxcut::qa_expected_cut;

fn main() -> qa_limits::Result<()> {
    let n = 10;
    let (g, _) = generate_graph(&GraphKind::Cycle { n }, 0)?;
    let run = qa_expected_cut(&g, &Schedule::linear_ramp(1.0)?, 0.05, 1e-8)?;
    let h = run.hamiltonian()?;
    let premise = Premise {
        kappa1: 0.9,
        kappa2: 0.46,
        g: h.coupling_bound(),
        delta: h.max_degree(),
        t: run.t,
    };
    let stats = hamming_stats(&run.distribution, &run.psi_t)?;
    println!("mean weight {:.6}, variance {:.6}", stats.mean_weight, stats.var_weight);
    for report in [
        variance_report(&run.distribution, &run.psi_t, &premise)?,
        concentration_report(&run.distribution, &run.psi_t, 0.25, &premise)?,
        ghz_contrast_report(14, 0.5, 0.1, 0.45)?,
    ] {
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(())
}
