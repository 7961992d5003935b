//! The operators `Γ₀`, `K = U C_m(Γ₀) U†` and `P = U P₀ U†`, and the check
//! `¼ n₁^{-2θ} (I - P) ⪯ K ⪯ 2 (I - P)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::chebyshev::smoothing_value;
use crate::error::{Error, Result};
use crate::evolution::StateVector;
use crate::linalg::{self, c, CMatrix, C64};

/// Smallest eigenvalue tolerated in the two sandwich differences.
pub const SANDWICH_TOL: f64 = 1e-9;
pub const DENSE_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct SmoothingOperatorBundle {
    pub n1: usize,
    pub m_degree: u32,
    /// Unrounded `½ n₁^{½-θ}`.
    pub m_real: f64,
    pub theta: f64,
    pub epsilon_f: f64,
    pub gamma0: CMatrix,
    pub k: CMatrix,
    pub p: CMatrix,
    pub spectrum_k: Vec<f64>,
    /// Smallest eigenvalue of `K - ¼ n₁^{-2θ}(I - P)`.
    pub lower_margin: f64,
    /// Smallest eigenvalue of `2(I - P) - K`.
    pub upper_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichSummary {
    pub n1: usize,
    pub theta: f64,
    pub m_degree: u32,
    pub m_real: f64,
    pub epsilon_f: f64,
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub records: BTreeMap<String, String>,
}

impl SmoothingOperatorBundle {
    pub fn summary(&self) -> SandwichSummary {
        SandwichSummary {
            n1: self.n1,
            theta: self.theta,
            m_degree: self.m_degree,
            m_real: self.m_real,
            epsilon_f: self.epsilon_f,
            lower_margin: self.lower_margin,
            upper_margin: self.upper_margin,
            k_min: self.spectrum_k.first().copied().unwrap_or(0.0),
            k_max: self.spectrum_k.last().copied().unwrap_or(0.0),
            records: BTreeMap::from([(
                "m_rounding".to_string(),
                format!("ceil({:.6}) = {}", self.m_real, self.m_degree),
            )]),
        }
    }
}

/// `m = ½ n₁^{½-θ}` rounded up, at least 1.
pub fn smoothing_degree(n1: usize, theta: f64) -> (u32, f64) {
    let m_real = 0.5 * (n1 as f64).powf(0.5 - theta);
    ((m_real - 1e-12).ceil().max(1.0) as u32, m_real)
}

/// `|s̄⟩ = (-b̄, ā)` for `|s⟩ = (a, b)`.
pub fn orthogonal_complement(s: [C64; 2]) -> [C64; 2] {
    [-s[1].conj(), s[0].conj()]
}

pub fn build_smoothing_operator(
    locals: &[[C64; 2]],
    n1: usize,
    theta: f64,
    u: &CMatrix,
) -> Result<SmoothingOperatorBundle> {
    if n1 < 2 {
        return Err(Error::domain("n1", format!("must be at least 2, got {n1}")));
    }
    if n1 > DENSE_QUBITS {
        return Err(Error::LimitExceeded {
            what: "smoothing operator register (qubits)",
            limit: DENSE_QUBITS,
            got: n1,
        });
    }
    if locals.len() != n1 {
        return Err(Error::DimensionMismatch {
            expected: n1,
            got: locals.len(),
        });
    }
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::domain("theta", format!("must lie in [0, 1/2], got {theta}")));
    }
    let dim = 1usize << n1;
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: u.nrows(),
        });
    }
    let defect = linalg::unitarity_defect(u);
    if defect > 1e-9 {
        return Err(Error::NormDrift { drift: defect });
    }
    let psi0 = StateVector::product(locals)?;

    let (m_degree, m_real) = smoothing_degree(n1, theta);
    let eps = 1.0 / n1 as f64;
    let mut gamma0 = CMatrix::zeros(dim, dim);
    for (q, s) in locals.iter().enumerate() {
        let bar = orthogonal_complement(*s);
        let proj = CMatrix::from_fn(2, 2, |i, j| bar[i] * bar[j].conj());
        linalg::embed_add(&proj, &[q], c(eps, 0.0), &mut gamma0);
    }
    let c_gamma = linalg::spectral_apply(&gamma0, |x| c(smoothing_value(m_degree, eps, x.clamp(0.0, 1.0)), 0.0));
    let k = linalg::hermitize(&linalg::matmul(&linalg::matmul(u, &c_gamma), &u.adjoint()));
    let image = u * nalgebra::DVector::from_column_slice(psi0.amplitudes());
    let p = linalg::matmul(
        &CMatrix::from_column_slice(dim, 1, image.as_slice()),
        &CMatrix::from_row_slice(1, dim, image.as_slice()).map(|z| z.conj()),
    );
    let complement = linalg::identity(dim) - &p;
    let floor = 0.25 * (n1 as f64).powf(-2.0 * theta);
    let lower_margin = linalg::eigvalsh(&(&k - &complement * c(floor, 0.0)))[0];
    let upper_margin = linalg::eigvalsh(&(&complement * c(2.0, 0.0) - &k))[0];
    let spectrum_k = linalg::eigvalsh(&k);
    if lower_margin < -SANDWICH_TOL || upper_margin < -SANDWICH_TOL {
        return Err(Error::SandwichViolation {
            lower_margin,
            upper_margin,
        });
    }
    Ok(SmoothingOperatorBundle {
        n1,
        m_degree,
        m_real,
        theta,
        epsilon_f: eps,
        gamma0,
        k,
        p,
        spectrum_k,
        lower_margin,
        upper_margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::propagate_unitary;
    use crate::graphs::{generate_graph, GraphKind};
    use crate::hamiltonian::{build_maxcut_annealer, Schedule};
    use crate::linalg::ZERO;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn zero_state() -> [C64; 2] {
        [c(1.0, 0.0), ZERO]
    }

    fn plus_state() -> [C64; 2] {
        [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]
    }

    #[test]
    fn degree_rounding() {
        assert_eq!(smoothing_degree(2, 0.0).0, 1);
        assert_eq!(smoothing_degree(8, 0.0).0, 2);
        assert_eq!(smoothing_degree(16, 0.0).0, 2);
        assert_eq!(smoothing_degree(36, 0.0).0, 3);
    }

    #[test]
    fn two_qubit_hand_example() {
        let b = build_smoothing_operator(&[zero_state(); 2], 2, 0.0, &linalg::identity(4)).unwrap();
        assert_eq!(b.m_degree, 1);
        let spectrum = linalg::eigvalsh(&b.gamma0);
        for (got, want) in spectrum.iter().zip([0.0, 0.5, 0.5, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        // K is diagonal here and vanishes on |00⟩ only
        assert!(b.k[(0, 0)].norm() < 1e-12);
        for i in 1..4 {
            assert!(b.k[(i, i)].re > 0.1);
        }
        assert!((b.p[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn initial_state_is_annihilated() {
        let locals = [plus_state(); 4];
        let b = build_smoothing_operator(&locals, 4, 0.25, &linalg::identity(16)).unwrap();
        let psi = StateVector::product(&locals).unwrap();
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let value = (v.adjoint() * &b.k * &v)[(0, 0)];
        assert!(value.norm() < 1e-12);
    }

    #[test]
    fn sandwich_after_anneal_on_c6() {
        let (g, _) = generate_graph(&GraphKind::Cycle { n: 6 }, 0).unwrap();
        let h = build_maxcut_annealer(&g, &Schedule::linear_ramp(0.4).unwrap()).unwrap();
        let u = propagate_unitary(&h, 0.4, 1e-10).unwrap();
        let b = build_smoothing_operator(&[plus_state(); 6], 6, 0.25, &u.matrix).unwrap();
        assert!(b.lower_margin >= -SANDWICH_TOL && b.upper_margin >= -SANDWICH_TOL);
        assert!(b.spectrum_k[0].abs() < 1e-9);
    }

    #[test]
    fn input_validation() {
        let id = linalg::identity(4);
        assert!(build_smoothing_operator(&[zero_state(); 3], 2, 0.0, &id).is_err());
        assert!(build_smoothing_operator(&[zero_state(); 2], 2, 0.9, &id).is_err());
        assert!(build_smoothing_operator(&[zero_state(); 2], 2, 0.0, &linalg::identity(8)).is_err());
        assert!(matches!(
            build_smoothing_operator(&[zero_state(); 13], 13, 0.0, &id),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
