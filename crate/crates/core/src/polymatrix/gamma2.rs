//! Estimates of the factorization norm
//! `γ₂(M) = min { max_i ‖v_i‖ · max_j ‖w_j‖ : M_ij = ⟨v_i|w_j⟩ }`.
//!
//! The upper value always comes from an explicit factorization. For a Gram
//! matrix `X ≻ 0` the vectors `v_i = X^{1/2} e_i`, `w_j = X^{-1/2} M e_j`
//! factor `M` with squared norms `X_ii` and `(M† X⁻¹ M)_jj`, so the search runs
//! over `X` and minimises `max(max_i X_ii, max_j (M†X⁻¹M)_jj)`, which is convex.
//! The lower value is a Schur-multiplier witness `‖M ∘ E‖ / ‖E‖`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chebyshev::chebyshev_t;
use crate::linalg::{self, c, CMatrix};

/// `M = left† · right`; column `i` of `left` is `v_i`, column `j` of `right` is `w_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub left: CMatrix,
    pub right: CMatrix,
}

fn max_column_norm(m: &CMatrix) -> f64 {
    m.column_iter().map(|col| col.norm()).fold(0.0, f64::max)
}

impl Factorization {
    pub fn value(&self) -> f64 {
        max_column_norm(&self.left) * max_column_norm(&self.right)
    }

    pub fn product(&self) -> CMatrix {
        linalg::matmul(&self.left.adjoint(), &self.right)
    }

    /// Factorization of the Schur product: `v_i ⊗ v'_i`, `w_j ⊗ w'_j`.
    pub fn schur(&self, other: &Factorization) -> Factorization {
        let tensor = |a: &CMatrix, b: &CMatrix| {
            let rows = a.nrows() * b.nrows();
            CMatrix::from_fn(rows, a.ncols(), |r, col| a[(r / b.nrows(), col)] * b[(r % b.nrows(), col)])
        };
        Factorization {
            left: tensor(&self.left, &other.left),
            right: tensor(&self.right, &other.right),
        }
    }

    /// `M = (U Σ^{1/2}) (Σ^{1/2} V†)`.
    pub fn svd_split(m: &CMatrix) -> Factorization {
        let (u, s, v) = linalg::svd(m);
        let mut left = u.adjoint();
        let mut right = v.adjoint();
        for (k, sigma) in s.iter().enumerate() {
            left.row_mut(k).scale_mut(sigma.sqrt());
            right.row_mut(k).scale_mut(sigma.sqrt());
        }
        Factorization { left, right }
    }

    /// Factorization induced by a Gram matrix `X ≻ 0`.
    pub fn from_gram(m: &CMatrix, x: &CMatrix) -> Option<Factorization> {
        let (vals, vecs) = linalg::eigh(&linalg::hermitize(x));
        if vals.first().is_none_or(|&v| !(v > 0.0)) {
            return None;
        }
        let scale = |g: &dyn Fn(f64) -> f64| {
            let mut scaled = vecs.clone();
            for (j, &lam) in vals.iter().enumerate() {
                scaled.column_mut(j).scale_mut(g(lam));
            }
            linalg::matmul(&scaled, &vecs.adjoint())
        };
        let root = scale(&|l| l.sqrt());
        let inv_root = scale(&|l| 1.0 / l.sqrt());
        Some(Factorization {
            left: root,
            right: linalg::matmul(&inv_root, m),
        })
    }

    pub fn gram(&self) -> CMatrix {
        linalg::matmul(&self.left.adjoint(), &self.left)
    }
}

/// Closed-form bounds available for divided-difference matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gamma2Context {
    /// `D_{T_n, λ}` with `λ ⊂ [-1, 1 + δ]`.
    Chebyshev { n: u32, delta: f64 },
    /// `D_{C_n, λ}` with `λ ⊂ [0, 1]` and shift `ε <= 1/3`.
    Smoothing { n: u32 },
}

impl Gamma2Context {
    pub fn analytic(&self) -> f64 {
        match *self {
            Gamma2Context::Chebyshev { n, delta } => {
                let nf = n as f64;
                (2.0 * nf * nf - 1.0) * chebyshev_t(n, 1.0 + delta)
            }
            Gamma2Context::Smoothing { n } => 6.0 * (n as f64).powi(2) - 3.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gamma2Options {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for Gamma2Options {
    fn default() -> Self {
        Gamma2Options {
            restarts: 2,
            iterations: 600,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Gamma2Estimate {
    /// `factorization.value() + residual`.
    pub upper: f64,
    pub lower: f64,
    pub analytic: Option<f64>,
    /// `‖M - left† right‖`, already added to `upper`.
    pub residual: f64,
    pub factorization: Factorization,
    /// The `E` achieving `lower`.
    pub witness: CMatrix,
}

pub fn gamma2_estimate(m: &CMatrix, context: Option<Gamma2Context>) -> Gamma2Estimate {
    gamma2_estimate_with(m, context, &Gamma2Options::default(), &[])
}

/// Estimate with extra candidate factorizations (each must factor `m`).
pub fn gamma2_estimate_with(
    m: &CMatrix,
    context: Option<Gamma2Context>,
    options: &Gamma2Options,
    seeds: &[Factorization],
) -> Gamma2Estimate {
    let (upper, residual, factorization) = upper_bound(m, options, seeds);
    let (lower, witness) = lower_bound(m, options);
    Gamma2Estimate {
        upper,
        lower,
        analytic: context.map(|ctx| ctx.analytic()),
        residual,
        factorization,
        witness,
    }
}

fn certified(m: &CMatrix, f: Factorization) -> (f64, f64, Factorization) {
    let residual = linalg::spectral_norm(&(m - f.product()));
    (f.value() + residual, residual, f)
}

fn upper_bound(m: &CMatrix, options: &Gamma2Options, seeds: &[Factorization]) -> (f64, f64, Factorization) {
    let d = m.nrows();
    let mut candidates = vec![Factorization::svd_split(m)];
    candidates.extend(seeds.iter().cloned());

    let sigma = linalg::spectral_norm(m).max(f64::MIN_POSITIVE);
    let reg = 1e-6 * sigma;
    let mut starts = vec![linalg::identity(d)];
    let svd_gram = {
        let f = &candidates[0];
        f.gram() + linalg::identity(d) * c(reg, 0.0)
    };
    starts.push(svd_gram);
    for s in seeds {
        starts.push(s.gram() + linalg::identity(d) * c(reg, 0.0));
    }
    for k in 0..options.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(k as u64));
        let b = CMatrix::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        starts.push(linalg::matmul(&b, &b.adjoint()) + linalg::identity(d));
    }
    let refined: Vec<Factorization> = starts
        .par_iter()
        .filter_map(|x0| descend(m, x0, options.iterations))
        .filter_map(|x| Factorization::from_gram(m, &x))
        .collect();
    candidates.extend(refined);
    candidates
        .into_iter()
        .map(|f| certified(m, f))
        .filter(|(v, _, _)| v.is_finite())
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("the singular value split is always finite")
}

struct Parts {
    diag_x: Vec<f64>,
    diag_y: Vec<f64>,
    x_inv: CMatrix,
}

fn parts(m: &CMatrix, l: &CMatrix) -> Option<Parts> {
    let x = linalg::matmul(l, &l.adjoint());
    let x_inv = x.clone().cholesky()?.inverse();
    let y = linalg::matmul(&linalg::matmul(&m.adjoint(), &x_inv), m);
    let diag_x = (0..x.nrows()).map(|i| x[(i, i)].re).collect();
    let diag_y = (0..y.nrows()).map(|j| y[(j, j)].re).collect();
    Some(Parts { diag_x, diag_y, x_inv })
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `τ log Σ exp(a/τ)` and the softmax weights.
fn smooth_max(values: &[f64], tau: f64) -> (f64, Vec<f64>) {
    let top = max_of(values);
    let weights: Vec<f64> = values.iter().map(|a| ((a - top) / tau).exp()).collect();
    let total: f64 = weights.iter().sum();
    (top + tau * total.ln(), weights.into_iter().map(|w| w / total).collect())
}

/// Rescale `L` so that the two halves of the objective have equal maxima.
fn balance(m: &CMatrix, l: &mut CMatrix) -> Option<Parts> {
    let p = parts(m, l)?;
    let (mx, my) = (max_of(&p.diag_x), max_of(&p.diag_y));
    if !(mx > 0.0 && my > 0.0) {
        return Some(p);
    }
    let s = (my / mx).powf(0.25);
    *l *= c(s, 0.0);
    parts(m, l)
}

/// Smoothed descent on `X = L L†`; returns the best Gram matrix found.
fn descend(m: &CMatrix, x0: &CMatrix, iterations: usize) -> Option<CMatrix> {
    let (vals, vecs) = linalg::eigh(&linalg::hermitize(x0));
    if vals.first().is_none_or(|&v| !(v > 0.0)) {
        return None;
    }
    let mut l = {
        let mut scaled = vecs.clone();
        for (j, &lam) in vals.iter().enumerate() {
            scaled.column_mut(j).scale_mut(lam.sqrt());
        }
        scaled
    };
    let d = m.nrows();
    let mut p = balance(m, &mut l)?;
    let product = |p: &Parts| (max_of(&p.diag_x) * max_of(&p.diag_y)).sqrt();
    let mut best = (product(&p), linalg::matmul(&l, &l.adjoint()));
    let mut tau = 0.05 * best.0;
    let mut eta = 0.1 / best.0.max(1e-300);
    let objective = |p: &Parts, tau: f64| {
        let all: Vec<f64> = p.diag_x.iter().chain(&p.diag_y).copied().collect();
        smooth_max(&all, tau)
    };
    for it in 0..iterations {
        let (value, weights) = objective(&p, tau);
        let (wx, wy) = weights.split_at(d);
        // G = diag(wx) - X⁻¹ M diag(wy) M† X⁻¹
        let xm = linalg::matmul(&p.x_inv, m);
        let mut xm_w = xm.clone();
        for (j, &w) in wy.iter().enumerate() {
            xm_w.column_mut(j).scale_mut(w);
        }
        let mut g = -linalg::matmul(&xm_w, &xm.adjoint());
        for (i, &w) in wx.iter().enumerate() {
            g[(i, i)] += c(w, 0.0);
        }
        let direction = linalg::matmul(&g, &l);
        let mut accepted = false;
        for _ in 0..40 {
            let trial = &l - &direction * c(eta, 0.0);
            if let Some(tp) = parts(m, &trial) {
                if objective(&tp, tau).0 < value {
                    l = trial;
                    p = tp;
                    eta *= 1.5;
                    accepted = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if it % 25 == 24 || !accepted {
            p = balance(m, &mut l)?;
            let current = product(&p);
            if current < best.0 {
                best = (current, linalg::matmul(&l, &l.adjoint()));
            }
            if !accepted && tau <= 1e-9 * best.0 {
                break;
            }
            tau = (tau * 0.6).max(1e-10 * best.0);
            eta = eta.max(1e-3 / best.0.max(1e-300));
        }
    }
    let current = product(&p);
    if current < best.0 {
        best = (current, linalg::matmul(&l, &l.adjoint()));
    }
    Some(best.1)
}

fn top_singular_pair(m: &CMatrix) -> (f64, CMatrix, CMatrix) {
    let (u, s, v) = linalg::svd(m);
    (s[0], u.columns(0, 1).into_owned(), v.columns(0, 1).into_owned())
}

fn witness_ratio(m: &CMatrix, e: &CMatrix) -> f64 {
    let denom = linalg::spectral_norm(e);
    if denom == 0.0 {
        return 0.0;
    }
    linalg::spectral_norm(&m.component_mul(e)) / denom
}

/// Local ascent of `log ‖M∘E‖ - log ‖E‖`.
fn ascend(m: &CMatrix, mut e: CMatrix, steps: usize) -> CMatrix {
    let mut ratio = witness_ratio(m, &e);
    let mut eta = 0.1 * linalg::spectral_norm(&e);
    for _ in 0..steps {
        let (top, a, b) = top_singular_pair(&m.component_mul(&e));
        let (norm_e, u, v) = top_singular_pair(&e);
        if top == 0.0 || norm_e == 0.0 {
            break;
        }
        let grad_num = m.map(|z| z.conj()).component_mul(&linalg::matmul(&a, &b.adjoint())) / c(top, 0.0);
        let grad_den = linalg::matmul(&u, &v.adjoint()) / c(norm_e, 0.0);
        let grad = grad_num - grad_den;
        let mut improved = false;
        for _ in 0..20 {
            let trial = &e + &grad * c(eta, 0.0);
            let r = witness_ratio(m, &trial);
            if r > ratio {
                e = trial;
                ratio = r;
                eta *= 1.5;
                improved = true;
                break;
            }
            eta *= 0.5;
        }
        if !improved {
            break;
        }
    }
    e
}

fn lower_bound(m: &CMatrix, options: &Gamma2Options) -> (f64, CMatrix) {
    let (rows, cols) = m.shape();
    let mut candidates = vec![
        CMatrix::from_element(rows, cols, c(1.0, 0.0)),
        CMatrix::from_fn(rows, cols, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }),
        m.map(|z| z.conj()),
    ];
    for k in 0..options.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add(1000 + k as u64));
        let e = CMatrix::from_fn(rows, cols, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        candidates.push(if rows == cols { linalg::hermitize(&e) } else { e });
    }
    let steps = (options.iterations / 10).max(20);
    candidates
        .into_par_iter()
        .map(|e| ascend(m, e, steps))
        .map(|e| (witness_ratio(m, &e), e))
        .collect::<Vec<_>>()
        .into_iter()
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("at least one witness")
}
