//! Mass of the Hamming l-boundary of a set under an annealed distribution.

use qa_limits::distributions::{hamming_boundary, isoperimetry_report, HammingSet, IsoPart, Premise};
use qa_limits::graphs::{generate_graph, GraphKind};
use qa_limits::hamiltonian::Schedule;
use qa_limits::maxcut::qa_expected_cut;

fn main() -> qa_limits::Result<()> {
    let n = 10;
    let (g, _) = generate_graph(&GraphKind::Cycle { n }, 0)?;
    let run = qa_expected_cut(&g, &Schedule::linear_ramp(1.0)?, 0.2, 1e-8)?;
    let h = run.hamiltonian()?;
    let premise = Premise {
        kappa1: 0.5,
        kappa2: 0.5,
        g: h.coupling_bound(),
        delta: h.max_degree(),
        t: run.t,
    };
    // strings of weight at most 3
    let f = HammingSet::new(n, (0..1usize << n).filter(|x| x.count_ones() <= 3))?;
    println!("p(F) = {:.6}", run.distribution.mass(&f));
    for ell in 1..=3 {
        let boundary = hamming_boundary(&f, ell);
        println!("l = {ell}: |boundary| = {}, mass = {:.6}", boundary.len(), run.distribution.mass(&boundary));
    }
    let report = isoperimetry_report(&run.distribution, &f, 0.0, &premise, IsoPart::Ii)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    let marginal = run.distribution.marginal(6)?;
    let f6 = HammingSet::ball(6, 0, 1)?;
    let report = isoperimetry_report(&marginal, &f6, 0.25, &premise, IsoPart::I)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
