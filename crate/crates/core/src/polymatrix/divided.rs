//! Divided-difference matrices and Fréchet derivatives of matrix functions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chebyshev::{chebyshev_t, chebyshev_t_derivative, smoothing_derivative, smoothing_value};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

/// Relative eigenvalue gap below which the derivative replaces the quotient.
pub const COINCIDENCE_GAP: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFn {
    Identity,
    Square,
    Constant { value: f64 },
    Chebyshev { n: u32 },
    /// `C_m` with shift `ε`.
    Smoothing { m: u32, eps: f64 },
}

impl ScalarFn {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            ScalarFn::Identity => x,
            ScalarFn::Square => x * x,
            ScalarFn::Constant { value } => value,
            ScalarFn::Chebyshev { n } => chebyshev_t(n, x),
            ScalarFn::Smoothing { m, eps } => smoothing_value(m, eps, x),
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            ScalarFn::Identity => 1.0,
            ScalarFn::Square => 2.0 * x,
            ScalarFn::Constant { .. } => 0.0,
            ScalarFn::Chebyshev { n } => chebyshev_t_derivative(n, x),
            ScalarFn::Smoothing { m, eps } => smoothing_derivative(m, eps, x),
        }
    }

    fn check(&self) -> Result<()> {
        match *self {
            ScalarFn::Smoothing { eps, .. } if !(eps > 0.0 && eps < 1.0) => {
                Err(Error::domain("epsilon", format!("must lie in (0, 1), got {eps}")))
            }
            ScalarFn::Constant { value } if !value.is_finite() => Err(Error::domain("value", "must be finite")),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DividedDifferenceMatrix {
    pub entries: DMatrix<f64>,
    pub lambda: Vec<f64>,
    pub f_id: ScalarFn,
}

impl DividedDifferenceMatrix {
    pub fn to_complex(&self) -> CMatrix {
        self.entries.map(|x| c(x, 0.0))
    }
}

/// `D_ij = (f(λ_i) - f(λ_j)) / (λ_i - λ_j)`, and `f'` at the midpoint for
/// (near-)coincident pairs.
pub fn divided_difference_matrix(f: ScalarFn, lambda: &[f64]) -> Result<DividedDifferenceMatrix> {
    f.check()?;
    if let Some(bad) = lambda.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain("lambda", format!("non-finite eigenvalue {bad}")));
    }
    let d = lambda.len();
    let scale = lambda.iter().fold(1.0f64, |a, x| a.max(x.abs()));
    let values: Vec<f64> = lambda.iter().map(|&x| f.value(x)).collect();
    let entries = DMatrix::from_fn(d, d, |i, j| {
        let (a, b) = (lambda[i], lambda[j]);
        if (a - b).abs() < COINCIDENCE_GAP * scale {
            f.derivative(0.5 * (a + b))
        } else {
            (values[i] - values[j]) / (a - b)
        }
    });
    Ok(DividedDifferenceMatrix {
        entries,
        lambda: lambda.to_vec(),
        f_id: f,
    })
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    let deviation = linalg::hermitian_deviation(m);
    if deviation > 1e-10 * (1.0 + linalg::max_abs(m)) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// `f(A)` for Hermitian `A`.
pub fn matrix_function(a: &CMatrix, f: ScalarFn) -> Result<CMatrix> {
    f.check()?;
    check_hermitian(a)?;
    Ok(linalg::spectral_apply(&linalg::hermitize(a), |x| c(f.value(x), 0.0)))
}

/// `d/dt f(A + tE)` at `t = 0`, i.e. `U (D_f,λ ∘ U†EU) U†`.
pub fn matrix_function_derivative(a: &CMatrix, e: &CMatrix, f: ScalarFn) -> Result<CMatrix> {
    check_hermitian(a)?;
    check_hermitian(e)?;
    if a.shape() != e.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: e.nrows(),
        });
    }
    let (vals, u) = linalg::eigh(&linalg::hermitize(a));
    let dd = divided_difference_matrix(f, &vals)?;
    let rotated = linalg::matmul(&linalg::matmul(&u.adjoint(), e), &u);
    let schur = rotated.component_mul(&dd.to_complex());
    Ok(linalg::matmul(&linalg::matmul(&u, &schur), &u.adjoint()))
}
