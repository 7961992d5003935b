//! Edge-local time-dependent Hamiltonians `H(t) = Σ_e u_e(t) h_e`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{l_boundary, Edge, InteractionGraph, VertexSet};
use crate::linalg::{self, c, CMatrix, C64};

/// Sampling grid used for the coupling bound `g`.
pub const DEFAULT_COUPLING_SAMPLES: usize = 1024;

const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant,
    LinearRamp,
    PiecewiseLinear,
    OneMinusRamp,
}

/// Piecewise-linear control `u : [0, T] → R` given by its breakpoints.
///
/// Outside `[0, T]` the schedule is held at its end values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    kind: ScheduleKind,
    breakpoints: Vec<(f64, f64)>,
}

impl Schedule {
    pub fn constant(value: f64, horizon: f64) -> Result<Self> {
        Self::build(ScheduleKind::Constant, vec![(0.0, value), (horizon, value)])
    }

    /// `u(t) = t / T`.
    pub fn linear_ramp(horizon: f64) -> Result<Self> {
        Self::build(ScheduleKind::LinearRamp, vec![(0.0, 0.0), (horizon, 1.0)])
    }

    /// Breakpoints must start at `t = 0` with strictly increasing times.
    pub fn piecewise_linear(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::build(ScheduleKind::PiecewiseLinear, points)
    }

    /// `1 - u(t)` on the same breakpoints.
    pub fn one_minus(&self) -> Self {
        Schedule {
            kind: ScheduleKind::OneMinusRamp,
            breakpoints: self.breakpoints.iter().map(|&(t, v)| (t, 1.0 - v)).collect(),
        }
    }

    /// Same shape stretched onto `[0, horizon]`.
    pub fn rescaled(&self, horizon: f64) -> Result<Self> {
        let old = self.horizon();
        let points = self
            .breakpoints
            .iter()
            .map(|&(t, v)| (t / old * horizon, v))
            .collect();
        Self::build(self.kind, points)
    }

    fn build(kind: ScheduleKind, breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidSchedule("need at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|(t, v)| !t.is_finite() || !v.is_finite()) {
            return Err(Error::InvalidSchedule("breakpoints must be finite".into()));
        }
        if breakpoints[0].0 != 0.0 {
            return Err(Error::InvalidSchedule("first breakpoint must be at t = 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidSchedule("breakpoint times must increase strictly".into()));
        }
        Ok(Schedule { kind, breakpoints })
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn horizon(&self) -> f64 {
        self.breakpoints[self.breakpoints.len() - 1].0
    }

    pub fn value(&self, t: f64) -> f64 {
        let pts = &self.breakpoints;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if t <= t1 {
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        pts[pts.len() - 1].1
    }

    pub fn knot_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.iter().map(|&(t, _)| t)
    }

    /// `u(0) = 0`, `u(T) = 1` and `0 <= u <= 1`.
    pub fn is_annealing_ramp(&self) -> bool {
        let first = self.breakpoints[0].1;
        let last = self.breakpoints[self.breakpoints.len() - 1].1;
        first == 0.0 && last == 1.0 && self.breakpoints.iter().all(|&(_, v)| (0.0..=1.0).contains(&v))
    }
}

/// A static Hermitian term on one edge (4x4) or loop (2x2), driven by a
/// schedule of the owning Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalTerm {
    pub edge: Edge,
    pub matrix: CMatrix,
    pub schedule: usize,
}

impl LocalTerm {
    /// Qubits the matrix acts on; bit `j` of the local index is `qubits()[j]`.
    pub fn qubits(&self) -> Vec<usize> {
        self.edge.endpoints()
    }
}

#[derive(Clone, Debug)]
pub struct TimeDependentHamiltonian {
    graph: InteractionGraph,
    schedules: Vec<Schedule>,
    terms: Vec<LocalTerm>,
    term_norms: Vec<f64>,
    horizon: f64,
    coupling_bound: f64,
}

impl TimeDependentHamiltonian {
    pub fn new(graph: InteractionGraph, schedules: Vec<Schedule>, terms: Vec<LocalTerm>) -> Result<Self> {
        if schedules.is_empty() {
            return Err(Error::InvalidSchedule("at least one schedule is required".into()));
        }
        let mut term_norms = Vec::with_capacity(terms.len());
        for term in &terms {
            let dim = if term.edge.is_loop() { 2 } else { 4 };
            if term.matrix.nrows() != dim || term.matrix.ncols() != dim {
                return Err(Error::InvalidTerm(format!(
                    "term on {:?} must be {dim}x{dim}, got {}x{}",
                    term.edge,
                    term.matrix.nrows(),
                    term.matrix.ncols()
                )));
            }
            let deviation = linalg::hermitian_deviation(&term.matrix);
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian { deviation });
            }
            if term.schedule >= schedules.len() {
                return Err(Error::InvalidTerm(format!("unknown schedule index {}", term.schedule)));
            }
            if !graph.contains_edge(term.edge) {
                return Err(Error::InvalidTerm(format!("edge {:?} is not in the graph", term.edge)));
            }
            term_norms.push(linalg::spectral_norm(&term.matrix));
        }
        let horizon = schedules.iter().map(Schedule::horizon).fold(0.0, f64::max);
        let mut h = TimeDependentHamiltonian {
            graph,
            schedules,
            terms,
            term_norms,
            horizon,
            coupling_bound: 0.0,
        };
        h.coupling_bound = coupling_bound(&h, DEFAULT_COUPLING_SAMPLES);
        Ok(h)
    }

    pub fn graph(&self) -> &InteractionGraph {
        &self.graph
    }

    pub fn n_qubits(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn schedules(&self) -> &[Schedule] {
        &self.schedules
    }

    pub fn term_norms(&self) -> &[f64] {
        &self.term_norms
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// `g` evaluated on the default sampling grid plus all breakpoints.
    pub fn coupling_bound(&self) -> f64 {
        self.coupling_bound
    }

    /// Maximum degree of the interaction graph, loops included.
    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    pub fn coefficients_at(&self, t: f64) -> Vec<f64> {
        let values: Vec<f64> = self.schedules.iter().map(|s| s.value(t)).collect();
        self.terms.iter().map(|term| values[term.schedule]).collect()
    }

    /// Sorted breakpoint times of all schedules.
    pub fn knot_times(&self) -> Vec<f64> {
        let mut knots: Vec<f64> = self.schedules.iter().flat_map(|s| s.knot_times()).collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        knots
    }

    /// Dense `Σ_e coef_e h_e` on the full register.
    pub fn dense_with(&self, coefficients: &[f64]) -> CMatrix {
        let dim = 1usize << self.n_qubits();
        let mut out = CMatrix::zeros(dim, dim);
        for (term, &coef) in self.terms.iter().zip(coefficients) {
            if coef != 0.0 {
                linalg::embed_add(&term.matrix, &term.qubits(), c(coef, 0.0), &mut out);
            }
        }
        out
    }

    pub fn dense_at(&self, t: f64) -> CMatrix {
        self.dense_with(&self.coefficients_at(t))
    }

    /// `out += scale * (Σ_e coef_e h_e) psi`.
    pub fn apply_with(&self, coefficients: &[f64], scale: C64, psi: &[C64], out: &mut [C64]) {
        for (term, &coef) in self.terms.iter().zip(coefficients) {
            if coef != 0.0 {
                linalg::apply_local_add(&term.matrix, &term.qubits(), scale * coef, psi, out);
            }
        }
    }

    /// Triangle-inequality bound on `‖Σ_e coef_e h_e‖`.
    pub fn norm_bound_with(&self, coefficients: &[f64]) -> f64 {
        coefficients
            .iter()
            .zip(&self.term_norms)
            .map(|(c, n)| c.abs() * n)
            .sum()
    }

    /// Copy keeping only the terms whose endpoints all lie in `region`.
    pub fn restricted_to(&self, region: &VertexSet) -> Self {
        let keep: Vec<usize> = (0..self.terms.len())
            .filter(|&k| self.terms[k].edge.endpoints().iter().all(|&v| region.contains(v)))
            .collect();
        TimeDependentHamiltonian {
            graph: self.graph.clone(),
            schedules: self.schedules.clone(),
            terms: keep.iter().map(|&k| self.terms[k].clone()).collect(),
            term_norms: keep.iter().map(|&k| self.term_norms[k]).collect(),
            horizon: self.horizon,
            coupling_bound: self.coupling_bound,
        }
    }
}

/// `max_t max_e |u_e(t)| ‖h_e‖` over a uniform grid of `t_samples` points on
/// `[0, T]` together with every breakpoint, which is exact for
/// piecewise-linear schedules.
pub fn coupling_bound(h: &TimeDependentHamiltonian, t_samples: usize) -> f64 {
    let samples = t_samples.max(2);
    let horizon = h.horizon;
    let mut times: Vec<f64> = (0..samples)
        .map(|k| horizon * k as f64 / (samples - 1) as f64)
        .collect();
    times.extend(h.knot_times());
    let mut best = 0.0f64;
    for &t in &times {
        let values: Vec<f64> = h.schedules.iter().map(|s| s.value(t)).collect();
        for (term, norm) in h.terms.iter().zip(&h.term_norms) {
            best = best.max(values[term.schedule].abs() * norm);
        }
    }
    best
}

/// Vertices `A ∪ ∂_L(A)` on which the restricted evolution acts.
pub fn restriction_region(h: &TimeDependentHamiltonian, a: &VertexSet, l: usize) -> VertexSet {
    a.union(&l_boundary(h.graph(), a, l))
}

/// Terms inside `A ∪ ∂_L(A)`, schedules unchanged.
pub fn restrict_hamiltonian(h: &TimeDependentHamiltonian, a: &VertexSet, l: usize) -> TimeDependentHamiltonian {
    h.restricted_to(&restriction_region(h, a, l))
}

/// `-X`, the single-qubit driver.
pub fn driver_term() -> CMatrix {
    -linalg::pauli_x()
}

/// `-(I - Z⊗Z)/2`, the per-edge cut term.
pub fn cut_term() -> CMatrix {
    let zz = linalg::kron(&linalg::pauli_z(), &linalg::pauli_z());
    (linalg::identity(4) - zz) * c(-0.5, 0.0)
}

/// `H(t) = (1 - u(t)) B + u(t) C` with `B = -Σ X_k` and
/// `C = -½ Σ_(i,j) (I - Z_i Z_j)`.
///
/// Driver terms live on loops, so the interaction graph of the result is `G`
/// plus one loop per vertex and its maximum degree is `Δ + 1`.
pub fn build_maxcut_annealer(g: &InteractionGraph, ramp: &Schedule) -> Result<TimeDependentHamiltonian> {
    if !ramp.is_annealing_ramp() {
        return Err(Error::InvalidSchedule(
            "annealing ramp must satisfy u(0) = 0, u(T) = 1 and stay in [0, 1]".into(),
        ));
    }
    if g.loop_count() > 0 {
        return Err(Error::InvalidGraph("MaxCut graphs must not contain loops".into()));
    }
    let augmented = g.with_vertex_loops();
    let schedules = vec![ramp.clone(), ramp.one_minus()];
    let mut terms: Vec<LocalTerm> = g
        .edges()
        .iter()
        .map(|&edge| LocalTerm {
            edge,
            matrix: cut_term(),
            schedule: 0,
        })
        .collect();
    terms.extend((0..g.n_vertices()).map(|v| LocalTerm {
        edge: Edge::new(v, v),
        matrix: driver_term(),
        schedule: 1,
    }));
    TimeDependentHamiltonian::new(augmented, schedules, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_graph, GraphKind};
    use crate::linalg::{embed, pauli_x, spectral_norm};

    fn cycle(n: usize) -> InteractionGraph {
        generate_graph(&GraphKind::Cycle { n }, 0).unwrap().0
    }

    fn path(n: usize) -> InteractionGraph {
        generate_graph(&GraphKind::Path { n }, 0).unwrap().0
    }

    fn global_flip(n: usize) -> CMatrix {
        (0..n).fold(linalg::identity(1 << n), |acc, q| embed(&pauli_x(), &[q], n) * acc)
    }

    #[test]
    fn schedule_evaluation() {
        let ramp = Schedule::linear_ramp(2.0).unwrap();
        assert_eq!(ramp.value(0.5), 0.25);
        assert_eq!(ramp.one_minus().value(0.5), 0.75);
        assert_eq!(ramp.value(5.0), 1.0);
        let pw = Schedule::piecewise_linear(vec![(0.0, 0.0), (1.0, 0.8), (2.0, 1.0)]).unwrap();
        assert!((pw.value(1.5) - 0.9).abs() < 1e-15);
        assert!(pw.is_annealing_ramp());
        assert!(Schedule::piecewise_linear(vec![(0.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(Schedule::piecewise_linear(vec![(0.1, 0.0), (1.0, 1.0)]).is_err());
        assert!(Schedule::constant(f64::NAN, 1.0).is_err());
        assert!(!Schedule::constant(0.5, 1.0).unwrap().is_annealing_ramp());
    }

    #[test]
    fn maxcut_annealer_on_k2() {
        let k2 = InteractionGraph::new(2, [(0, 1)]).unwrap();
        let h = build_maxcut_annealer(&k2, &Schedule::linear_ramp(1.0).unwrap()).unwrap();
        assert_eq!(h.terms().iter().filter(|t| t.edge.is_loop()).count(), 2);
        assert_eq!(h.terms().iter().filter(|t| !t.edge.is_loop()).count(), 1);
        assert!((h.coupling_bound() - 1.0).abs() < 1e-12);
        assert_eq!(h.max_degree(), 2);
    }

    #[test]
    fn maxcut_endpoints_are_driver_and_cost() {
        let g = cycle(6);
        let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(0.7).unwrap()).unwrap();
        assert_eq!(h.terms().len(), 12);
        let n = 6;
        let mut b = CMatrix::zeros(64, 64);
        let mut cost = CMatrix::zeros(64, 64);
        for q in 0..n {
            b -= embed(&pauli_x(), &[q], n);
        }
        for e in g.edges() {
            cost += embed(&cut_term(), &[e.u, e.v], n);
        }
        assert!((h.dense_at(0.0) - b).norm() < 1e-12);
        assert!((h.dense_at(0.7) - cost).norm() < 1e-12);
    }

    #[test]
    fn maxcut_commutes_with_global_flip() {
        let g = path(5);
        let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(1.0).unwrap()).unwrap();
        let flip = global_flip(5);
        for k in 0..8 {
            let ht = h.dense_at(k as f64 / 7.0);
            let comm = &ht * &flip - &flip * &ht;
            assert!(spectral_norm(&comm) <= 1e-10);
        }
    }

    #[test]
    fn rejects_bad_ramps_and_terms() {
        let g = path(3);
        let bad = Schedule::piecewise_linear(vec![(0.0, 0.1), (1.0, 1.0)]).unwrap();
        assert!(build_maxcut_annealer(&g, &bad).is_err());
        let not_hermitian = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let g_loop = g.with_vertex_loops();
        let s = vec![Schedule::constant(1.0, 1.0).unwrap()];
        let term = LocalTerm {
            edge: Edge::new(0, 0),
            matrix: not_hermitian,
            schedule: 0,
        };
        assert!(matches!(
            TimeDependentHamiltonian::new(g_loop.clone(), s.clone(), vec![term]),
            Err(Error::NotHermitian { .. })
        ));
        let missing = LocalTerm {
            edge: Edge::new(0, 2),
            matrix: cut_term(),
            schedule: 0,
        };
        assert!(TimeDependentHamiltonian::new(g_loop, s, vec![missing]).is_err());
    }

    #[test]
    fn coupling_bound_examples() {
        let g = InteractionGraph::new(1, [(0, 0)]).unwrap();
        let two_x = pauli_x() * c(2.0, 0.0);
        let h = TimeDependentHamiltonian::new(
            g.clone(),
            vec![Schedule::constant(0.5, 1.0).unwrap()],
            vec![LocalTerm {
                edge: Edge::new(0, 0),
                matrix: two_x.clone(),
                schedule: 0,
            }],
        )
        .unwrap();
        assert!((coupling_bound(&h, 16) - 1.0).abs() < 1e-12);
        let zero = TimeDependentHamiltonian::new(
            g,
            vec![Schedule::constant(0.0, 1.0).unwrap()],
            vec![LocalTerm {
                edge: Edge::new(0, 0),
                matrix: two_x,
                schedule: 0,
            }],
        )
        .unwrap();
        assert_eq!(coupling_bound(&zero, 16), 0.0);
        let c5 = cycle(5);
        let anneal = build_maxcut_annealer(&c5, &Schedule::linear_ramp(3.0).unwrap()).unwrap();
        assert!((coupling_bound(&anneal, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn restriction_examples() {
        let p5 = path(5);
        let h = build_maxcut_annealer(&p5, &Schedule::linear_ramp(1.0).unwrap()).unwrap();
        let a = VertexSet::new([2], 5).unwrap();
        let r = restrict_hamiltonian(&h, &a, 1);
        let mut edges: Vec<Edge> = r.terms().iter().map(|t| t.edge).collect();
        edges.sort();
        assert_eq!(
            edges,
            vec![Edge::new(1, 1), Edge::new(1, 2), Edge::new(2, 2), Edge::new(2, 3), Edge::new(3, 3)]
        );
        let everything = restrict_hamiltonian(&h, &VertexSet::all(5), 1);
        assert_eq!(everything.terms().len(), h.terms().len());

        let c6 = cycle(6);
        let h6 = build_maxcut_annealer(&c6, &Schedule::linear_ramp(1.0).unwrap()).unwrap();
        let r6 = restrict_hamiltonian(&h6, &VertexSet::new([0], 6).unwrap(), 2);
        let loops: Vec<usize> = {
            let mut v: Vec<usize> = r6.terms().iter().filter(|t| t.edge.is_loop()).map(|t| t.edge.u).collect();
            v.sort();
            v
        };
        assert_eq!(loops, vec![0, 1, 2, 4, 5]);
        assert_eq!(r6.terms().iter().filter(|t| !t.edge.is_loop()).count(), 4);
    }

    #[test]
    fn restriction_is_idempotent_and_monotone() {
        let g = cycle(8);
        let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(1.0).unwrap()).unwrap();
        let a = VertexSet::new([0, 3], 8).unwrap();
        let mut previous = 0;
        for l in 0..5 {
            let once = restrict_hamiltonian(&h, &a, l);
            let twice = restrict_hamiltonian(&once, &a, l);
            assert_eq!(once.terms(), twice.terms());
            assert!(once.terms().len() >= previous);
            previous = once.terms().len();
        }
    }
}
