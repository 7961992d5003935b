//! Dense complex linear algebra shared by the simulators and the
//! matrix-function machinery.
//!
//! Basis convention: in a register of `n` qubits, qubit `k` is bit `k` of the
//! basis index (little-endian). A local operator acting on qubits
//! `[q0, q1, ...]` uses the same convention for its own index, so bit `j` of
//! the local index is the state of `qubits[j]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Dimension above which spectral norms switch from a full decomposition to
/// power iteration.
pub const EXACT_NORM_LIMIT: usize = 4096;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry of `|M - M^†|`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

pub fn is_real(m: &CMatrix) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

fn to_faer<T: Copy>(m: &DMatrix<T>) -> faer::Mat<T> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer<T: Copy + nalgebra::Scalar>(m: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn real_part(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.re)
}

/// Dense product.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    from_faer((to_faer(a) * to_faer(b)).as_ref())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// Real symmetric input takes the (faster) real path.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let (vals, vecs) = if is_real(m) {
        let eig = to_faer(&real_part(m))
            .self_adjoint_eigen(faer::Side::Lower)
            .expect("symmetric eigendecomposition converges");
        let s = eig.S().column_vector();
        let u = eig.U();
        ((0..n).map(|k| s[k]).collect::<Vec<_>>(), CMatrix::from_fn(n, n, |i, j| c(u[(i, j)], 0.0)))
    } else {
        let eig = to_faer(m)
            .self_adjoint_eigen(faer::Side::Lower)
            .expect("Hermitian eigendecomposition converges");
        let s = eig.S().column_vector();
        ((0..n).map(|k| s[k].re).collect::<Vec<_>>(), from_faer(eig.U()))
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    if order.iter().enumerate().all(|(k, &o)| k == o) {
        return (vals, vecs);
    }
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    (sorted_vals, sorted_vecs)
}

pub fn eigvalsh(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = if is_real(m) {
        to_faer(&real_part(m))
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("symmetric eigenvalues converge")
    } else {
        to_faer(m)
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .expect("Hermitian eigenvalues converge")
    };
    vals.sort_by(f64::total_cmp);
    vals
}

/// Thin singular value decomposition `M = U diag(s) V†`, `s` descending.
pub fn svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let dec = to_faer(m).thin_svd().expect("singular value decomposition converges");
    let s = dec.S().column_vector();
    let k = m.nrows().min(m.ncols());
    (from_faer(dec.U()), (0..k).map(|i| s[i].re).collect(), from_faer(dec.V()))
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    to_faer(m).singular_values().expect("singular values converge")
}

/// `V diag(g(λ)) V^†` for a Hermitian `m = V diag(λ) V^†`.
pub fn spectral_apply(m: &CMatrix, g: impl Fn(f64) -> C64) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let mut scaled = vecs.clone();
    for (j, &lam) in vals.iter().enumerate() {
        let gj = g(lam);
        for z in scaled.column_mut(j).iter_mut() {
            *z *= gj;
        }
    }
    matmul(&scaled, &vecs.adjoint())
}

/// `exp(-i s H)` for Hermitian `H`.
pub fn expm_minus_i(h: &CMatrix, s: f64) -> CMatrix {
    spectral_apply(h, |lam| C64::from_polar(1.0, -s * lam))
}

/// `exp(-i s H) U` without forming the exponential.
pub fn expm_minus_i_apply(h: &CMatrix, s: f64, u: &CMatrix) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let mut w = matmul(&vecs.adjoint(), u);
    for (k, &lam) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -s * lam);
        for z in w.row_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    matmul(&vecs, &w)
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    if m.nrows().max(m.ncols()) > EXACT_NORM_LIMIT {
        return power_iteration_norm(m, 500, 1e-12);
    }
    if m.nrows() == m.ncols() && hermitian_deviation(m) <= 1e-13 * (1.0 + max_abs(m)) {
        let vals = eigvalsh(&hermitize(m));
        return vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    }
    singular_values(m).into_iter().fold(0.0f64, f64::max)
}

fn power_iteration_norm(m: &CMatrix, max_iter: usize, rel_tol: f64) -> f64 {
    let n = m.ncols();
    let mut v = CVector::from_fn(n, |i, _| c(1.0 + (i % 7) as f64 * 0.1, (i % 3) as f64 * 0.05));
    let nv = v.norm();
    v /= c(nv, 0.0);
    let mut est = 0.0;
    for _ in 0..max_iter {
        let w = m * &v;
        let u = m.adjoint() * &w;
        let nu = u.norm();
        if nu == 0.0 {
            return 0.0;
        }
        let next = nu.sqrt();
        v = u / c(nu, 0.0);
        if (next - est).abs() <= rel_tol * next {
            return next;
        }
        est = next;
    }
    est
}

/// A cheap upper bound on the spectral norm: `min(‖M‖_F, sqrt(‖M‖_1 ‖M‖_∞))`.
pub fn spectral_norm_upper(m: &CMatrix) -> f64 {
    let fro = m.norm();
    let mut col_max = 0.0f64;
    for j in 0..m.ncols() {
        col_max = col_max.max(m.column(j).iter().map(|z| z.norm()).sum());
    }
    let mut row_max = 0.0f64;
    for i in 0..m.nrows() {
        row_max = row_max.max(m.row(i).iter().map(|z| z.norm()).sum());
    }
    fro.min((col_max * row_max).sqrt())
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `‖U^† U - I‖` measured entrywise-max, a unitarity diagnostic.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let d = matmul(&u.adjoint(), u) - identity(u.nrows());
    spectral_norm_upper(&d)
}

#[inline]
fn local_index(global: usize, qubits: &[usize]) -> usize {
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &q)| acc | (((global >> q) & 1) << j))
}

#[inline]
fn with_local(global: usize, qubits: &[usize], local: usize) -> usize {
    qubits.iter().enumerate().fold(global, |acc, (j, &q)| {
        let bit = (local >> j) & 1;
        (acc & !(1 << q)) | (bit << q)
    })
}

/// Embed a `2^k x 2^k` operator on the listed qubits into an `n`-qubit register.
pub fn embed(op: &CMatrix, qubits: &[usize], n: usize) -> CMatrix {
    let dim = 1usize << n;
    let mut out = CMatrix::zeros(dim, dim);
    embed_add(op, qubits, ONE, &mut out);
    out
}

/// `out += coef * embed(op)`.
pub fn embed_add(op: &CMatrix, qubits: &[usize], coef: C64, out: &mut CMatrix) {
    let dim = out.nrows();
    let ld = op.nrows();
    for col in 0..dim {
        let lc = local_index(col, qubits);
        for lr in 0..ld {
            let v = op[(lr, lc)];
            if v == ZERO {
                continue;
            }
            let row = with_local(col, qubits, lr);
            out[(row, col)] += coef * v;
        }
    }
}

/// `out += coef * embed(op) * input`, without materialising the embedding.
pub fn apply_local_add(op: &CMatrix, qubits: &[usize], coef: C64, input: &[C64], out: &mut [C64]) {
    let ld = op.nrows();
    let mask = qubits.iter().fold(0usize, |m, &q| m | (1 << q));
    let mut gathered = [ZERO; 16];
    let mut offsets = [0usize; 16];
    for (l, off) in offsets.iter_mut().enumerate().take(ld) {
        *off = with_local(0, qubits, l);
    }
    for base in 0..input.len() {
        if base & mask != 0 {
            continue;
        }
        for l in 0..ld {
            gathered[l] = input[base | offsets[l]];
        }
        for lr in 0..ld {
            let mut acc = ZERO;
            for lc in 0..ld {
                acc += op[(lr, lc)] * gathered[lc];
            }
            out[base | offsets[lr]] += coef * acc;
        }
    }
}

/// Trace norm (sum of singular values).
pub fn trace_norm(m: &CMatrix) -> f64 {
    singular_values(m).iter().sum()
}
