//! Certified time-ordered propagation.
//!
//! Each step of length `dt` is the fourth-order commutator-free exponential
//! built on the two Gauss-Legendre nodes,
//!
//! ```text
//! U_step = exp(-i dt (a₁ H(t₁) + a₂ H(t₂))) · exp(-i dt (a₂ H(t₁) + a₁ H(t₂)))
//! a₁,₂ = 1/4 ∓ √3/6,   t₁,₂ = t + (1/2 ∓ √3/6) dt
//! ```
//!
//! Steps never straddle a schedule breakpoint. The step count is doubled
//! until two successive refinements differ by at most the requested
//! tolerance; that discrepancy is reported as the accuracy.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::TimeDependentHamiltonian;
use crate::linalg::{self, c, CMatrix, CVector, C64, ZERO};

const SQRT3: f64 = 1.732_050_807_568_877_2;
const NODE_OFFSET: f64 = SQRT3 / 6.0;
const WEIGHT_SMALL: f64 = 0.25 - SQRT3 / 6.0;
const WEIGHT_LARGE: f64 = 0.25 + SQRT3 / 6.0;

/// Allowed drift of `‖ψ‖` or of `U^†U` away from the identity.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionLimits {
    /// Largest register for dense unitaries.
    pub dense_qubits: usize,
    /// Largest register for state vectors.
    pub state_qubits: usize,
    /// Maximum number of step doublings before giving up.
    pub max_doublings: u32,
}

impl Default for EvolutionLimits {
    fn default() -> Self {
        EvolutionLimits {
            dense_qubits: 12,
            state_qubits: 14,
            max_doublings: 14,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Propagator {
    pub matrix: CMatrix,
    /// Step-halving discrepancy in operator norm (upper-bounded).
    pub accuracy: f64,
    /// Steps of the accepted refinement.
    pub steps: usize,
}

impl Propagator {
    pub fn identity(n_qubits: usize) -> Self {
        Propagator {
            matrix: linalg::identity(1 << n_qubits),
            accuracy: 0.0,
            steps: 0,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let out = &self.matrix * CVector::from_column_slice(psi.amplitudes());
        StateVector {
            amplitudes: out.iter().copied().collect(),
        }
    }

    /// Heisenberg picture `U^† O U`.
    pub fn conjugate(&self, observable: &CMatrix) -> CMatrix {
        linalg::matmul(&linalg::matmul(&self.matrix.adjoint(), observable), &self.matrix)
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.matrix)
    }
}

/// Pure state on `n` qubits (little-endian basis indices).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(1),
                got: len,
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNITARITY_TOL {
            return Err(Error::NormDrift { drift: norm - 1.0 });
        }
        Ok(StateVector { amplitudes })
    }

    /// `|s_1⟩ ⊗ ... ⊗ |s_n⟩`; each local state must be normalised.
    pub fn product(locals: &[[C64; 2]]) -> Result<Self> {
        let mut amplitudes = vec![c(1.0, 0.0)];
        for (q, s) in locals.iter().enumerate() {
            let norm = (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
            if (norm - 1.0).abs() > UNITARITY_TOL {
                return Err(Error::NormDrift { drift: norm - 1.0 });
            }
            let mut next = vec![ZERO; amplitudes.len() * 2];
            for (idx, &a) in amplitudes.iter().enumerate() {
                next[idx] = a * s[0];
                next[idx | (1 << q)] = a * s[1];
            }
            amplitudes = next;
        }
        Ok(StateVector { amplitudes })
    }

    pub fn plus(n_qubits: usize) -> Self {
        let amp = c((0.5f64).powf(n_qubits as f64 / 2.0), 0.0);
        StateVector {
            amplitudes: vec![amp; 1 << n_qubits],
        }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = c(1.0, 0.0);
        StateVector { amplitudes }
    }

    /// `(|0…0⟩ + |1…1⟩)/√2`.
    pub fn ghz(n_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        let amp = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amplitudes[0] = amp;
        amplitudes[(1 << n_qubits) - 1] = amp;
        StateVector { amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// CSV with header `index,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (k, z) in self.amplitudes.iter().enumerate() {
            let _ = writeln!(out, "{k},{},{}", z.re, z.im);
        }
        out
    }
}

/// Operator acting on the listed qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub qubits: Vec<usize>,
    pub matrix: CMatrix,
}

impl LocalOperator {
    pub fn new(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let dim = 1usize << qubits.len();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        Ok(LocalOperator { qubits, matrix })
    }

    pub fn embed(&self, n_qubits: usize) -> CMatrix {
        linalg::embed(&self.matrix, &self.qubits, n_qubits)
    }
}

#[derive(Clone, Debug)]
pub enum Observable {
    Dense(CMatrix),
    Local(LocalOperator),
    Sum(Vec<LocalOperator>),
}

impl Observable {
    fn hermitian_deviation(&self) -> f64 {
        match self {
            Observable::Dense(m) => linalg::hermitian_deviation(m),
            Observable::Local(op) => linalg::hermitian_deviation(&op.matrix),
            Observable::Sum(ops) => ops
                .iter()
                .map(|op| linalg::hermitian_deviation(&op.matrix))
                .fold(0.0, f64::max),
        }
    }

    fn apply(&self, psi: &[C64]) -> Vec<C64> {
        match self {
            Observable::Dense(m) => (m * CVector::from_column_slice(psi)).iter().copied().collect(),
            Observable::Local(op) => {
                let mut out = vec![ZERO; psi.len()];
                linalg::apply_local_add(&op.matrix, &op.qubits, c(1.0, 0.0), psi, &mut out);
                out
            }
            Observable::Sum(ops) => {
                let mut out = vec![ZERO; psi.len()];
                for op in ops {
                    linalg::apply_local_add(&op.matrix, &op.qubits, c(1.0, 0.0), psi, &mut out);
                }
                out
            }
        }
    }
}

/// `⟨ψ|O|ψ⟩` for Hermitian `O`.
pub fn expectation_value(psi: &StateVector, observable: &Observable) -> Result<f64> {
    let deviation = observable.hermitian_deviation();
    if deviation > 1e-12 {
        return Err(Error::NotHermitian { deviation });
    }
    if let Observable::Dense(m) = observable {
        if m.nrows() != psi.amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: psi.amplitudes.len(),
                got: m.nrows(),
            });
        }
    }
    let o_psi = observable.apply(&psi.amplitudes);
    let value: C64 = psi
        .amplitudes
        .iter()
        .zip(&o_psi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    debug_assert!(value.im.abs() <= 1e-10 * (1.0 + value.re.abs()));
    Ok(value.re)
}

/// Interval pieces on which every schedule is linear.
fn segments(h: &TimeDependentHamiltonian, t0: f64, t1: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![t0];
    cuts.extend(h.knot_times().into_iter().filter(|&t| t > t0 && t < t1));
    cuts.push(t1);
    cuts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Coefficient vectors of the two exponentials of one step, in application order.
fn step_coefficients(h: &TimeDependentHamiltonian, t: f64, dt: f64) -> (Vec<f64>, Vec<f64>) {
    let early = h.coefficients_at(t + (0.5 - NODE_OFFSET) * dt);
    let late = h.coefficients_at(t + (0.5 + NODE_OFFSET) * dt);
    let first = early
        .iter()
        .zip(&late)
        .map(|(a, b)| WEIGHT_LARGE * a + WEIGHT_SMALL * b)
        .collect();
    let second = early
        .iter()
        .zip(&late)
        .map(|(a, b)| WEIGHT_SMALL * a + WEIGHT_LARGE * b)
        .collect();
    (first, second)
}

/// Initial per-segment step counts keeping `dt ‖H‖` at most about 2.
fn base_steps(h: &TimeDependentHamiltonian, pieces: &[(f64, f64)]) -> Vec<usize> {
    pieces
        .iter()
        .map(|&(a, b)| {
            let bound = h
                .norm_bound_with(&h.coefficients_at(a))
                .max(h.norm_bound_with(&h.coefficients_at(b)));
            (((b - a) * bound / 2.0).ceil() as usize).max(1)
        })
        .collect()
}

fn check_request(t0: f64, t1: f64, tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::domain("tol", format!("must be positive, got {tol}")));
    }
    if !t0.is_finite() || !t1.is_finite() || t1 < t0 {
        return Err(Error::domain("T", format!("need 0 <= t0 <= t1, got [{t0}, {t1}]")));
    }
    Ok(())
}

pub fn propagate_unitary(h: &TimeDependentHamiltonian, t: f64, tol: f64) -> Result<Propagator> {
    propagate_interval(h, 0.0, t, tol, &EvolutionLimits::default())
}

/// Certified propagator from `t0` to `t1`.
pub fn propagate_interval(
    h: &TimeDependentHamiltonian,
    t0: f64,
    t1: f64,
    tol: f64,
    limits: &EvolutionLimits,
) -> Result<Propagator> {
    check_request(t0, t1, tol)?;
    let n = h.n_qubits();
    if n > limits.dense_qubits {
        return Err(Error::LimitExceeded {
            what: "dense unitary register (qubits)",
            limit: limits.dense_qubits,
            got: n,
        });
    }
    if t1 == t0 {
        return Ok(Propagator::identity(n));
    }
    let pieces = segments(h, t0, t1);
    let base = base_steps(h, &pieces);
    let run = |multiplier: usize| -> (CMatrix, usize) {
        let mut u = linalg::identity(1 << n);
        let mut total = 0;
        for (&(a, b), &count) in pieces.iter().zip(&base) {
            let steps = count * multiplier;
            let dt = (b - a) / steps as f64;
            for k in 0..steps {
                let (first, second) = step_coefficients(h, a + k as f64 * dt, dt);
                u = linalg::expm_minus_i_apply(&h.dense_with(&first), dt, &u);
                u = linalg::expm_minus_i_apply(&h.dense_with(&second), dt, &u);
            }
            total += steps;
        }
        (u, total)
    };
    let (mut previous, _) = run(1);
    let mut reached = f64::INFINITY;
    let mut steps = 0;
    for doubling in 1..=limits.max_doublings {
        let (current, total) = run(1 << doubling);
        let diff = &current - &previous;
        reached = if diff.nrows() <= 512 {
            linalg::spectral_norm(&diff)
        } else {
            linalg::spectral_norm_upper(&diff)
        };
        steps = total;
        if reached <= tol {
            let propagator = Propagator {
                matrix: current,
                accuracy: reached,
                steps,
            };
            let defect = propagator.unitarity_defect();
            if defect > UNITARITY_TOL {
                return Err(Error::NormDrift { drift: defect });
            }
            return Ok(propagator);
        }
        previous = current;
    }
    Err(Error::NonConvergent { tol, reached, steps })
}

/// `exp(-i s A) ψ` for `A = Σ coef_e h_e`, by Taylor series on sub-steps with
/// `s ‖A‖ <= 1/2`.
fn apply_exponential(h: &TimeDependentHamiltonian, coefficients: &[f64], s: f64, psi: &[C64]) -> Vec<C64> {
    let bound = h.norm_bound_with(coefficients) * s.abs();
    let substeps = ((bound / 0.5).ceil() as usize).max(1);
    let tau = s / substeps as f64;
    let mut state = psi.to_vec();
    let mut term = vec![ZERO; psi.len()];
    let mut next = vec![ZERO; psi.len()];
    for _ in 0..substeps {
        term.copy_from_slice(&state);
        for order in 1..=40 {
            next.iter_mut().for_each(|z| *z = ZERO);
            h.apply_with(coefficients, c(0.0, -tau / order as f64), &term, &mut next);
            std::mem::swap(&mut term, &mut next);
            let mut size = 0.0;
            for (acc, t) in state.iter_mut().zip(&term) {
                *acc += t;
                size += t.norm_sqr();
            }
            if size.sqrt() <= 1e-17 {
                break;
            }
        }
    }
    state
}

pub fn evolve_state(h: &TimeDependentHamiltonian, psi0: &StateVector, t: f64, tol: f64) -> Result<StateVector> {
    evolve_state_interval(h, psi0, 0.0, t, tol, &EvolutionLimits::default())
}

/// Certified matrix-free evolution of a state from `t0` to `t1`.
pub fn evolve_state_interval(
    h: &TimeDependentHamiltonian,
    psi0: &StateVector,
    t0: f64,
    t1: f64,
    tol: f64,
    limits: &EvolutionLimits,
) -> Result<StateVector> {
    check_request(t0, t1, tol)?;
    let n = h.n_qubits();
    if n > limits.state_qubits {
        return Err(Error::LimitExceeded {
            what: "state-vector register (qubits)",
            limit: limits.state_qubits,
            got: n,
        });
    }
    if psi0.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            got: psi0.amplitudes.len(),
        });
    }
    if t1 == t0 {
        return Ok(psi0.clone());
    }
    let pieces = segments(h, t0, t1);
    let base = base_steps(h, &pieces);
    let run = |multiplier: usize| -> (Vec<C64>, usize) {
        let mut state = psi0.amplitudes.clone();
        let mut total = 0;
        for (&(a, b), &count) in pieces.iter().zip(&base) {
            let steps = count * multiplier;
            let dt = (b - a) / steps as f64;
            for k in 0..steps {
                let (first, second) = step_coefficients(h, a + k as f64 * dt, dt);
                state = apply_exponential(h, &first, dt, &state);
                state = apply_exponential(h, &second, dt, &state);
            }
            total += steps;
        }
        (state, total)
    };
    let (mut previous, _) = run(1);
    let mut reached = f64::INFINITY;
    let mut steps = 0;
    for doubling in 1..=limits.max_doublings {
        let (current, total) = run(1 << doubling);
        reached = current
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        steps = total;
        if reached <= tol {
            let state = StateVector { amplitudes: current };
            let drift = state.norm() - 1.0;
            if drift.abs() > UNITARITY_TOL {
                return Err(Error::NormDrift { drift });
            }
            return Ok(state);
        }
        previous = current;
    }
    Err(Error::NonConvergent { tol, reached, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_graph, Edge, GraphKind, InteractionGraph};
    use crate::hamiltonian::{build_maxcut_annealer, cut_term, LocalTerm, Schedule};
    use crate::linalg::{pauli_x, pauli_z, I};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn single_qubit(matrix: CMatrix, horizon: f64) -> TimeDependentHamiltonian {
        let g = InteractionGraph::new(1, [(0, 0)]).unwrap();
        TimeDependentHamiltonian::new(
            g,
            vec![Schedule::constant(1.0, horizon).unwrap()],
            vec![LocalTerm {
                edge: Edge::new(0, 0),
                matrix,
                schedule: 0,
            }],
        )
        .unwrap()
    }

    fn anneal(kind: GraphKind, horizon: f64) -> TimeDependentHamiltonian {
        let (g, _) = generate_graph(&kind, 3).unwrap();
        build_maxcut_annealer(&g, &Schedule::linear_ramp(horizon).unwrap()).unwrap()
    }

    #[test]
    fn rabi_rotation() {
        let h = single_qubit(-pauli_x(), FRAC_PI_2);
        let u = propagate_unitary(&h, FRAC_PI_2, 1e-10).unwrap();
        assert!((u.matrix.clone() - pauli_x() * I).norm() < 1e-9);
        let image = u.apply(&StateVector::basis(1, 0));
        assert!((image.amplitudes()[1] - I).norm() < 1e-9);
    }

    #[test]
    fn zero_time_is_identity() {
        let h = anneal(GraphKind::Cycle { n: 4 }, 1.0);
        let u = propagate_unitary(&h, 0.0, 1e-8).unwrap();
        assert_eq!(u.accuracy, 0.0);
        assert_eq!(u.matrix, linalg::identity(16));
        let psi = StateVector::plus(4);
        assert_eq!(evolve_state(&h, &psi, 0.0, 1e-8).unwrap(), psi);
    }

    #[test]
    fn k2_annealer_is_certified_unitary() {
        let h = anneal(GraphKind::Path { n: 2 }, 1.0);
        let u = propagate_unitary(&h, 1.0, 1e-8).unwrap();
        assert!(u.unitarity_defect() <= 1e-10);
        assert!(u.accuracy <= 1e-8);
    }

    #[test]
    fn phase_evolution_of_plus() {
        let t = 0.37;
        let h = single_qubit(-pauli_z(), 1.0);
        let psi = evolve_state(&h, &StateVector::plus(1), t, 1e-10).unwrap();
        let expected = [
            C64::from_polar(FRAC_1_SQRT_2, t),
            C64::from_polar(FRAC_1_SQRT_2, -t),
        ];
        for k in 0..2 {
            assert!((psi.amplitudes()[k] - expected[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn state_matches_unitary_on_c6() {
        let tol = 1e-8;
        let h = anneal(GraphKind::Cycle { n: 6 }, 0.5);
        let psi0 = StateVector::plus(6);
        let via_state = evolve_state(&h, &psi0, 0.5, tol).unwrap();
        let via_unitary = propagate_unitary(&h, 0.5, tol).unwrap().apply(&psi0);
        assert!(via_state.distance(&via_unitary) <= 2.0 * tol);
    }

    #[test]
    fn composition_over_half_intervals() {
        let tol = 1e-8;
        let h = anneal(GraphKind::Path { n: 4 }, 0.8);
        let limits = EvolutionLimits::default();
        let full = propagate_interval(&h, 0.0, 0.8, tol, &limits).unwrap();
        let first = propagate_interval(&h, 0.0, 0.4, tol, &limits).unwrap();
        let second = propagate_interval(&h, 0.4, 0.8, tol, &limits).unwrap();
        let composed = &second.matrix * &first.matrix;
        assert!(linalg::spectral_norm(&(composed - full.matrix)) <= 2.0 * tol);
    }

    #[test]
    fn time_independent_matches_direct_exponential() {
        let g = InteractionGraph::new(2, [(0, 1), (0, 0)]).unwrap();
        let h = TimeDependentHamiltonian::new(
            g,
            vec![Schedule::constant(0.7, 1.0).unwrap()],
            vec![
                LocalTerm {
                    edge: Edge::new(0, 1),
                    matrix: cut_term(),
                    schedule: 0,
                },
                LocalTerm {
                    edge: Edge::new(0, 0),
                    matrix: pauli_x(),
                    schedule: 0,
                },
            ],
        )
        .unwrap();
        let tol = 1e-9;
        let u = propagate_unitary(&h, 0.9, tol).unwrap();
        let direct = linalg::expm_minus_i(&h.dense_at(0.0), 0.9);
        assert!(linalg::spectral_norm(&(u.matrix - direct)) <= tol);
    }

    #[test]
    fn limits_and_domain_errors() {
        let h = anneal(GraphKind::Cycle { n: 13 }, 1.0);
        assert!(matches!(propagate_unitary(&h, 1.0, 1e-8), Err(Error::LimitExceeded { .. })));
        let small = anneal(GraphKind::Cycle { n: 3 }, 1.0);
        assert!(propagate_unitary(&small, 1.0, 0.0).is_err());
        assert!(propagate_unitary(&small, -1.0, 1e-8).is_err());
        let tight = EvolutionLimits {
            max_doublings: 1,
            ..EvolutionLimits::default()
        };
        assert!(matches!(
            propagate_interval(&small, 0.0, 1.0, 1e-15, &tight),
            Err(Error::NonConvergent { .. })
        ));
        let wrong = StateVector::plus(2);
        assert!(evolve_state(&small, &wrong, 1.0, 1e-8).is_err());
    }

    #[test]
    fn expectation_examples() {
        let z0 = Observable::Local(LocalOperator::new(vec![0], pauli_z()).unwrap());
        assert!(expectation_value(&StateVector::plus(1), &z0).unwrap().abs() < 1e-15);

        let g = generate_graph(&GraphKind::Cycle { n: 5 }, 0).unwrap().0;
        let cost = Observable::Sum(
            g.edges()
                .iter()
                .map(|e| LocalOperator::new(vec![e.u, e.v], cut_term()).unwrap())
                .collect(),
        );
        assert!((expectation_value(&StateVector::plus(5), &cost).unwrap() + 2.5).abs() < 1e-12);

        let total_z = Observable::Sum((0..4).map(|q| LocalOperator::new(vec![q], pauli_z()).unwrap()).collect());
        assert!(expectation_value(&StateVector::ghz(4), &total_z).unwrap().abs() < 1e-15);

        let bad = Observable::Dense(CMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), ZERO, ZERO]));
        assert!(matches!(
            expectation_value(&StateVector::plus(1), &bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn state_csv_layout() {
        let csv = StateVector::basis(1, 1).to_csv();
        assert_eq!(csv, "index,re,im\n0,0,0\n1,1,0\n");
    }
}
