//! Dense Hermitian linear algebra helpers on top of `nalgebra`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::{C64, CMatrix, CVector};

/// Conjugate-transpose residual `max |A - A†|` (entrywise max modulus).
pub fn hermitian_residual(a: &CMatrix) -> f64 {
    let adj = a.adjoint();
    (a - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Symmetrize: `(A + A†)/2`.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Real trace of a (numerically) Hermitian matrix.
pub fn trace_re(a: &CMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted
/// ascending and a deterministic eigenvector order.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as columns.
pub fn eigh(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let se = hermitize(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &CMatrix) -> f64 {
    let (vals, _) = eigh(a);
    vals.first().copied().unwrap_or(0.0)
}

/// Trace norm `Σ |λ_i|` of a Hermitian matrix.
pub fn trace_norm(a: &CMatrix) -> f64 {
    let (vals, _) = eigh(a);
    vals.iter().map(|v| v.abs()).sum()
}

/// Apply a real function to a Hermitian matrix through its spectrum.
pub fn hermitian_map(a: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eigh(a);
    let n = a.nrows();
    let mut diag = CMatrix::zeros(n, n);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(f(v), 0.0);
    }
    &vecs * diag * vecs.adjoint()
}

/// Von Neumann functional `tr Γ log Γ` with eigenvalues clamped at `clamp`
/// before the logarithm (`x log x` extended by 0 at 0).
pub fn trace_x_log_x(a: &CMatrix, clamp: f64) -> f64 {
    let (vals, _) = eigh(a);
    vals.iter()
        .map(|&v| if v <= clamp { 0.0 } else { v * Float::ln(v) })
        .sum()
}

/// Kronecker product (used by the full-tensor reference paths).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Identity matrix of size `n`.
pub fn eye(n: usize) -> CMatrix {
    DMatrix::identity(n, n)
}

/// Frobenius inner product `tr[A† B]`.
pub fn frobenius_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Physics-convention inner product `Σ conj(u_i) v_i`.
pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn norm(u: &CVector) -> f64 {
    Float::sqrt(u.iter().map(|z| z.norm_sqr()).sum::<f64>())
}
