//! Chebyshev polynomials, divided differences, γ₂ estimates and the
//! smoothing-operator bundle.

pub mod chebyshev;
pub mod divided;
pub mod gamma2;
pub mod smoothing;

pub use chebyshev::{chebyshev_t, chebyshev_t_derivative, chebyshev_t_recurrence, smoothing_floor, smoothing_poly};
pub use divided::{divided_difference_matrix, matrix_function, matrix_function_derivative, DividedDifferenceMatrix, ScalarFn};
pub use gamma2::{gamma2_estimate, gamma2_estimate_with, Factorization, Gamma2Context, Gamma2Estimate, Gamma2Options};
pub use smoothing::{build_smoothing_operator, smoothing_degree, SandwichSummary, SmoothingOperatorBundle};
