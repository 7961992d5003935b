//! Distance between Hamming balls around the two optimal cuts of C8, with the
//! shell masses K_d.

use qa_limits::distributions::{layers_report, parse_bitstring, HammingSet, Premise};
use qa_limits::graphs::{generate_graph, GraphKind};
use qa_limits::hamiltonian::Schedule;
use qa_limits::maxcut::{brute_force_maxcut, qa_expected_cut};

fn main() -> qa_limits::Result<()> {
    let n = 8;
    let (g, _) = generate_graph(&GraphKind::Cycle { n }, 0)?;
    let run = qa_expected_cut(&g, &Schedule::linear_ramp(1.0)?, 0.5, 1e-8)?;
    let (cut_star, witness) = brute_force_maxcut(&g)?;
    let x = parse_bitstring(&witness)?;
    let f1 = HammingSet::ball(n, x, 1)?;
    let f2 = HammingSet::ball(n, x ^ ((1 << n) - 1), 1)?;
    let h = run.hamiltonian()?;
    let premise = Premise {
        kappa1: 0.5,
        kappa2: 0.5,
        g: h.coupling_bound(),
        delta: h.max_degree(),
        t: run.t,
    };
    let (report, diag) = layers_report(&run.distribution, &f1, &f2, &premise)?;
    println!("Cut* = {cut_star} at {witness}; E[cut] = {:.6}", run.expected_cut);
    println!("{}", serde_json::to_string_pretty(&report)?);
    print!("{}", diag.shells_csv());
    Ok(())
}
