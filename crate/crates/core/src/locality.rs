//! Numerical Lieb-Robinson checks and tree-local edge expectations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{
    evolve_state_interval, expectation_value, propagate_interval, EvolutionLimits, LocalOperator, Observable,
    StateVector,
};
use crate::graphs::{Edge, InteractionGraph, VertexSet};
use crate::hamiltonian::{restriction_region, LocalTerm, TimeDependentHamiltonian};
use crate::linalg::{self, c, CMatrix};

/// Slack on `lhs <= rhs` absorbing the integrator tolerance.
pub const LR_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `card_a`, `norm_o`, `L`, `T`, `g`, `delta`, `tol`.
    pub params: BTreeMap<String, f64>,
    pub satisfied: bool,
    /// `rhs >= 2‖O_A‖`, where the bound says nothing.
    pub vacuous: bool,
}

impl LocalityReport {
    pub fn l(&self) -> usize {
        self.params["L"] as usize
    }
}

/// `√(2/π) |A| ‖O‖ exp(-L(ln L - ln T - ln(4g(Δ-1))) - ½ ln L)`.
pub fn lr_bound_rhs(card_a: usize, norm_o: f64, l: usize, t: f64, g: f64, delta: usize) -> Result<f64> {
    if l <= 1 {
        return Err(Error::domain("L", format!("must exceed 1, got {l}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("T", format!("must be positive, got {t}")));
    }
    if delta <= 1 {
        return Err(Error::domain("delta", format!("must exceed 1, got {delta}")));
    }
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::domain("g", format!("must be positive, got {g}")));
    }
    if !(norm_o >= 0.0) {
        return Err(Error::domain("norm_o", format!("must be non-negative, got {norm_o}")));
    }
    let lf = l as f64;
    let exponent = -lf * (lf.ln() - t.ln() - (4.0 * g * (delta as f64 - 1.0)).ln()) - 0.5 * lf.ln();
    Ok((2.0 / std::f64::consts::PI).sqrt() * card_a as f64 * norm_o * exponent.exp())
}

fn check_support(a: &VertexSet, observable: &LocalOperator) -> Result<()> {
    if observable.qubits.iter().all(|&q| a.contains(q)) {
        Ok(())
    } else {
        Err(Error::SupportViolation {
            support: observable.qubits.clone(),
            region: a.members().to_vec(),
        })
    }
}

/// `V_A† O_A V_A` on the full register. `V_A` acts trivially outside
/// `A ∪ ∂_L(A)`, so it is computed on that sub-register and embedded.
fn restricted_heisenberg(
    h: &TimeDependentHamiltonian,
    a: &VertexSet,
    observable: &LocalOperator,
    l: usize,
    t: f64,
    tol: f64,
) -> Result<CMatrix> {
    let region = restriction_region(h, a, l);
    let sub = subregister_hamiltonian(h, &region)?;
    let local_qubits: Vec<usize> = observable
        .qubits
        .iter()
        .map(|q| region.members().binary_search(q).expect("support checked against A"))
        .collect();
    let o_sub = linalg::embed(&observable.matrix, &local_qubits, region.len());
    let v = propagate_interval(&sub, 0.0, t, tol, &EvolutionLimits::default())?;
    Ok(linalg::embed(&v.conjugate(&o_sub), region.members(), h.n_qubits()))
}

/// `‖U†(T) O_A U(T) - V_A†(T) O_A V_A(T)‖`, with `V_A` generated by the terms
/// inside `A ∪ ∂_L(A)`.
pub fn lr_discrepancy(
    h: &TimeDependentHamiltonian,
    a: &VertexSet,
    observable: &LocalOperator,
    l: usize,
    t: f64,
    tol: f64,
) -> Result<f64> {
    check_support(a, observable)?;
    if l <= 1 {
        return Err(Error::domain("L", format!("must exceed 1, got {l}")));
    }
    let u = propagate_interval(h, 0.0, t, tol, &EvolutionLimits::default())?;
    let heisenberg = u.conjugate(&observable.embed(h.n_qubits()));
    let restricted = restricted_heisenberg(h, a, observable, l, t, tol)?;
    Ok(linalg::spectral_norm(&(heisenberg - restricted)))
}

/// One report per `L`, sharing the full propagator.
pub fn lr_sweep(
    h: &TimeDependentHamiltonian,
    a: &VertexSet,
    observable: &LocalOperator,
    ls: &[usize],
    t: f64,
    tol: f64,
) -> Result<Vec<LocalityReport>> {
    check_support(a, observable)?;
    let limits = EvolutionLimits::default();
    let norm_o = linalg::spectral_norm(&observable.matrix);
    let g = h.coupling_bound();
    let delta = h.max_degree();
    let rhs: Vec<f64> = ls
        .iter()
        .map(|&l| lr_bound_rhs(a.len(), norm_o, l, t, g, delta))
        .collect::<Result<_>>()?;
    let u = propagate_interval(h, 0.0, t, tol, &limits)?;
    let heisenberg = u.conjugate(&observable.embed(h.n_qubits()));
    let lhs: Vec<f64> = ls
        .par_iter()
        .map(|&l| {
            let restricted = restricted_heisenberg(h, a, observable, l, t, tol)?;
            Ok(linalg::spectral_norm(&(&heisenberg - restricted)))
        })
        .collect::<Result<_>>()?;
    Ok(ls
        .iter()
        .zip(lhs.iter().zip(&rhs))
        .map(|(&l, (&lhs, &rhs))| {
            let params = BTreeMap::from([
                ("card_a".to_string(), a.len() as f64),
                ("norm_o".to_string(), norm_o),
                ("L".to_string(), l as f64),
                ("T".to_string(), t),
                ("g".to_string(), g),
                ("delta".to_string(), delta as f64),
                ("tol".to_string(), tol),
            ]);
            LocalityReport {
                lhs,
                rhs,
                params,
                satisfied: lhs <= rhs + LR_SLACK,
                vacuous: rhs >= 2.0 * norm_o,
            }
        })
        .collect())
}

pub fn lr_check(
    h: &TimeDependentHamiltonian,
    a: &VertexSet,
    observable: &LocalOperator,
    l: usize,
    t: f64,
    tol: f64,
) -> Result<LocalityReport> {
    Ok(lr_sweep(h, a, observable, &[l], t, tol)?.remove(0))
}

/// CSV with header `L,lhs,rhs,vacuous`.
pub fn sweep_csv(reports: &[LocalityReport]) -> String {
    let mut out = String::from("L,lhs,rhs,vacuous\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{}", r.l(), r.lhs, r.rhs, r.vacuous);
    }
    out
}

/// The Hamiltonian restricted to `region`, relabelled onto qubits
/// `0..region.len()` in increasing vertex order.
pub fn subregister_hamiltonian(h: &TimeDependentHamiltonian, region: &VertexSet) -> Result<TimeDependentHamiltonian> {
    let index: BTreeMap<usize, usize> = region.members().iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut edges = Vec::new();
    let mut terms = Vec::new();
    for term in h.terms() {
        let (Some(&u), Some(&v)) = (index.get(&term.edge.u), index.get(&term.edge.v)) else {
            continue;
        };
        edges.push((u, v));
        // relabelling is monotone, so the endpoint order (and the local index convention) is kept
        terms.push(LocalTerm {
            edge: Edge::new(u, v),
            matrix: term.matrix.clone(),
            schedule: term.schedule,
        });
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = InteractionGraph::new(region.len(), edges)?;
    TimeDependentHamiltonian::new(graph, h.schedules().to_vec(), terms)
}

/// `½(I - Z⊗Z)`, the cut indicator of one edge.
pub fn cut_observable() -> CMatrix {
    let zz = linalg::kron(&linalg::pauli_z(), &linalg::pauli_z());
    (linalg::identity(4) - zz) * c(0.5, 0.0)
}

/// `E(e, L) = ⟨+|V_e† C_e V_e|+⟩` computed on the sub-register spanned by the
/// radius-`L` ball around `e`.
pub fn local_edge_expectation(h: &TimeDependentHamiltonian, edge: Edge, l: usize, t: f64, tol: f64) -> Result<f64> {
    if edge.is_loop() || !h.graph().contains_edge(edge) {
        return Err(Error::InvalidTerm(format!("({}, {}) is not a non-loop edge of H", edge.u, edge.v)));
    }
    let region = h.graph().ball([edge.u, edge.v], l);
    let limits = EvolutionLimits::default();
    if region.len() > limits.state_qubits {
        return Err(Error::LimitExceeded {
            what: "edge neighbourhood register (qubits)",
            limit: limits.state_qubits,
            got: region.len(),
        });
    }
    let sub = subregister_hamiltonian(h, &region)?;
    let position = |v: usize| region.members().binary_search(&v).expect("endpoint lies in its own ball");
    let psi = evolve_state_interval(&sub, &StateVector::plus(region.len()), 0.0, t, tol, &limits)?;
    let observable = Observable::Local(LocalOperator::new(
        vec![position(edge.u), position(edge.v)],
        cut_observable(),
    )?);
    expectation_value(&psi, &observable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_graph, GraphKind};
    use crate::hamiltonian::{build_maxcut_annealer, Schedule};
    use crate::linalg::pauli_z;

    fn annealer(kind: GraphKind, horizon: f64) -> TimeDependentHamiltonian {
        let (g, _) = generate_graph(&kind, 0).unwrap();
        build_maxcut_annealer(&g, &Schedule::linear_ramp(horizon).unwrap()).unwrap()
    }

    fn z0() -> LocalOperator {
        LocalOperator::new(vec![0], pauli_z()).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let v = lr_bound_rhs(1, 1.0, 4, 0.5, 1.0, 2).unwrap();
        let oracle = (2.0 / std::f64::consts::PI).sqrt() * (-4.0 * 2f64.ln() - 0.5 * 4f64.ln()).exp();
        assert!((v - oracle).abs() < 1e-15);
        assert!((v - 0.0249).abs() < 1e-4);
        assert_eq!(lr_bound_rhs(1, 0.0, 4, 0.5, 1.0, 2).unwrap(), 0.0);
        let doubled = lr_bound_rhs(2, 1.0, 4, 0.5, 1.0, 2).unwrap();
        assert!((doubled - 2.0 * v).abs() < 1e-15);
        assert!(lr_bound_rhs(1, 1.0, 1, 0.5, 1.0, 2).is_err());
        assert!(lr_bound_rhs(1, 1.0, 3, 0.0, 1.0, 2).is_err());
        assert!(lr_bound_rhs(1, 1.0, 3, 0.5, 1.0, 1).is_err());
        assert!(lr_bound_rhs(1, 1.0, 3, 0.5, 0.0, 2).is_err());
    }

    #[test]
    fn trivial_discrepancies() {
        let h = annealer(GraphKind::Cycle { n: 6 }, 0.5);
        let all = VertexSet::all(6);
        assert!(lr_discrepancy(&h, &all, &z0(), 2, 0.5, 1e-9).unwrap() < 1e-8);
        let a = VertexSet::new([0], 6).unwrap();
        assert!(lr_discrepancy(&h, &a, &z0(), 2, 0.0, 1e-9).unwrap() == 0.0);
        let outside = LocalOperator::new(vec![3], pauli_z()).unwrap();
        assert!(matches!(
            lr_discrepancy(&h, &a, &outside, 2, 0.5, 1e-9),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn cycle_eight_sweep() {
        let h = annealer(GraphKind::Cycle { n: 8 }, 0.5);
        let a = VertexSet::new([0], 8).unwrap();
        let reports = lr_sweep(&h, &a, &z0(), &[2, 3, 4], 0.5, 1e-8).unwrap();
        assert_eq!(reports[0].params["delta"], 3.0);
        assert_eq!(reports[0].params["g"], 1.0);
        for r in &reports {
            assert!(r.satisfied, "{r:?}");
            assert!(r.lhs <= 2.0 + 1e-9);
        }
        assert!(reports[1].lhs > 0.0 && reports[1].lhs < reports[1].rhs);
        assert!(reports[2].lhs < 1e-7);
        let csv = sweep_csv(&reports);
        assert!(csv.starts_with("L,lhs,rhs,vacuous\n2,"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn edge_expectation_at_zero_time() {
        let h = annealer(GraphKind::Cycle { n: 5 }, 1.0);
        let e = local_edge_expectation(&h, Edge::new(0, 1), 2, 0.0, 1e-8).unwrap();
        assert!((e - 0.5).abs() < 1e-14);
        assert!(local_edge_expectation(&h, Edge::new(0, 2), 2, 0.5, 1e-8).is_err());
        assert!(local_edge_expectation(&h, Edge::new(0, 0), 2, 0.5, 1e-8).is_err());
    }

    #[test]
    fn path_and_cycle_neighbourhoods_agree() {
        let tol = 1e-8;
        let path = annealer(GraphKind::Path { n: 13 }, 0.3);
        let cycle = annealer(GraphKind::Cycle { n: 12 }, 0.3);
        let a = local_edge_expectation(&path, Edge::new(6, 7), 2, 0.3, tol).unwrap();
        let b = local_edge_expectation(&cycle, Edge::new(0, 11), 2, 0.3, tol).unwrap();
        assert!((a - b).abs() <= 2.0 * tol, "{a} vs {b}");
        assert!(a > 0.5);
    }

    #[test]
    fn large_l_matches_full_register() {
        let tol = 1e-9;
        let h = annealer(GraphKind::Cycle { n: 6 }, 0.5);
        let local = local_edge_expectation(&h, Edge::new(2, 3), 3, 0.5, tol).unwrap();
        let psi = crate::evolution::evolve_state(&h, &StateVector::plus(6), 0.5, tol).unwrap();
        let obs = Observable::Local(LocalOperator::new(vec![2, 3], cut_observable()).unwrap());
        let full = expectation_value(&psi, &obs).unwrap();
        assert!((local - full).abs() <= 2.0 * tol);
    }

    #[test]
    fn subregister_relabels_terms() {
        let h = annealer(GraphKind::Path { n: 5 }, 1.0);
        let region = VertexSet::new([1, 2, 4], 5).unwrap();
        let sub = subregister_hamiltonian(&h, &region).unwrap();
        assert_eq!(sub.n_qubits(), 3);
        // edge (1,2) and three loops survive
        assert_eq!(sub.terms().len(), 4);
        assert!(sub.graph().contains_edge(Edge::new(0, 1)));
    }
}
