//! Chebyshev polynomials of the first kind and the smoothing polynomial
//! `C_m(x) = 1 - T_m(f(x)) / T_m(f(0))`, `f(x) = (1 + ε - 2x) / (1 - ε)`.

use crate::error::{Error, Result};

/// `T_n(x)` via `cos(n acos x)` on `[-1, 1]` and `cosh(n acosh |x|)` outside.
pub fn chebyshev_t(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    if x.abs() <= 1.0 {
        (nf * x.acos()).cos()
    } else {
        let magnitude = (nf * x.abs().acosh()).cosh();
        if x < 0.0 && n % 2 == 1 {
            -magnitude
        } else {
            magnitude
        }
    }
}

/// `T_n(x)` from the doubling identities `T_2k = 2T_k² - 1` and
/// `T_2k+1 = 2T_k+1 T_k - x`.
pub fn chebyshev_t_recurrence(n: u32, x: f64) -> f64 {
    // returns (T_n, T_n+1)
    fn pair(n: u32, x: f64) -> (f64, f64) {
        if n == 0 {
            return (1.0, x);
        }
        let (a, b) = pair(n / 2, x);
        if n.is_multiple_of(2) {
            (2.0 * a * a - 1.0, 2.0 * a * b - x)
        } else {
            (2.0 * a * b - x, 2.0 * b * b - 1.0)
        }
    }
    pair(n, x).0
}

/// `T_n'(x) = n U_n-1(x)`, with `U` from its three-term recurrence.
pub fn chebyshev_t_derivative(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 1 {
        return 1.0;
    }
    for _ in 2..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    n as f64 * cur
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("epsilon", format!("must lie in (0, 1), got {eps}")))
    }
}

/// `f(x) = (1 + ε - 2x) / (1 - ε)`.
pub fn shift_map(eps: f64, x: f64) -> f64 {
    (1.0 + eps - 2.0 * x) / (1.0 - eps)
}

/// `C_m(x)` with a general shift `ε`; defined for every real `x`.
pub fn smoothing_value(m: u32, eps: f64, x: f64) -> f64 {
    1.0 - chebyshev_t(m, shift_map(eps, x)) / chebyshev_t(m, shift_map(eps, 0.0))
}

pub fn smoothing_derivative(m: u32, eps: f64, x: f64) -> f64 {
    2.0 / (1.0 - eps) * chebyshev_t_derivative(m, shift_map(eps, x)) / chebyshev_t(m, shift_map(eps, 0.0))
}

/// `C_m(x)` with `ε = 1/n₁`, for `x` in `[0, 1]`.
pub fn smoothing_poly(m: u32, n1: usize, x: f64) -> Result<f64> {
    if n1 < 2 {
        return Err(Error::domain("n1", format!("must be at least 2, got {n1}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("x", format!("must lie in [0, 1], got {x}")));
    }
    let eps = 1.0 / n1 as f64;
    check_eps(eps)?;
    Ok(smoothing_value(m, eps, x))
}

/// Guaranteed floor of `C_m` on `[1/n₁, 1]`: `1 - 1/(1 + 2m²/n₁)`.
pub fn smoothing_floor(m: u32, n1: usize) -> f64 {
    let y = 2.0 * (m as f64).powi(2) / n1 as f64;
    y / (1.0 + y)
}
