//! Density operators on symmetric sectors: partial traces, trace-norm
//! geometry, Wick diagnostics and reproducible random states.
//!
//! The occupation-basis partial trace uses the closed form
//!
//! ```text
//! γ^(n)[m, m'] = Σ_r  w(m, r) w(m', r) Γ[m+r, m'+r],   |r| = N-n,
//! w(a, r)     = sqrt( (N-n)! n! (a+r)! / (N! a! r!) )
//! ```
//!
//! equivalent to tracing out `N-n` tensor factors of the embedded state;
//! the test suite validates it against the full-tensor reference for every
//! shape it can afford.

use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combin::{ln_factorial, ln_multi_factorial};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symspace::{annihilation_power, random_gaussian_matrix, Ket, SymSector};
use crate::tol::TOL;
use crate::{C64, CMatrix};

/// Hermitian, positive, trace-one operator on a symmetric sector.
#[derive(Debug, Clone)]
pub struct DensityOp {
    sector: SymSector,
    mat: CMatrix,
}

impl DensityOp {
    /// Validate Hermiticity, positivity and unit trace.
    pub fn new(sector: SymSector, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != sector.dim() || mat.ncols() != sector.dim() {
            return Err(Error::ShapeMismatch { expected: "matrix on the given sector" });
        }
        let res = linalg::hermitian_residual(&mat);
        if res > TOL.hermitian {
            return Err(Error::NotHermitian { residual: res });
        }
        let mat = linalg::hermitize(&mat);
        let tr = linalg::trace_re(&mat);
        if (tr - 1.0).abs() > TOL.trace_one {
            return Err(Error::TraceNotOne { trace: tr });
        }
        let min_eig = linalg::min_eigenvalue(&mat);
        if min_eig < -TOL.psd {
            return Err(Error::NotPositive { min_eigenvalue: min_eig });
        }
        Ok(DensityOp { sector, mat })
    }

    /// Pure state `|ψ⟩⟨ψ|`.
    pub fn from_ket(ket: &Ket) -> Self {
        DensityOp { sector: ket.sector().clone(), mat: ket.projector_matrix() }
    }

    /// `Id / dim` on the sector.
    pub fn maximally_mixed(sector: SymSector) -> Self {
        let dim = sector.dim();
        let mat = linalg::eye(dim) * C64::new(1.0 / dim as f64, 0.0);
        DensityOp { sector, mat }
    }

    /// Normalized Gram matrix of `rank` independent complex-Gaussian
    /// vectors; reproducible per seed.
    pub fn random(sector: SymSector, rank: usize, seed: u64) -> Result<Self> {
        let dim = sector.dim();
        if rank == 0 || rank > dim {
            return Err(Error::OutOfRange { what: "rank", value: rank as f64 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gaussian_matrix(dim, rank, &mut rng);
        let m = &g * g.adjoint();
        let tr = linalg::trace_re(&m);
        Ok(DensityOp { sector, mat: m / C64::new(tr, 0.0) })
    }

    pub fn sector(&self) -> &SymSector {
        &self.sector
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        linalg::trace_re(&self.mat)
    }

    /// `tr Γ²`.
    pub fn purity(&self) -> f64 {
        linalg::frobenius_inner(&self.mat, &self.mat).re
    }

    /// Eigenvalues sorted ascending.
    pub fn spectrum(&self) -> Vec<f64> {
        linalg::eigh(&self.mat).0
    }

    /// Reduced density matrix on `n` particles (trace-one convention).
    pub fn partial_trace(&self, n: u32) -> Result<DensityOp> {
        let mat = partial_trace_matrix(&self.sector, &self.mat, n)?;
        let out_sector = SymSector::new(self.sector.modes(), n)?;
        // Constructed positive and trace-one up to roundoff by the kernel
        // identity; revalidate cheaply.
        DensityOp::new(out_sector, mat)
    }
}

/// Contraction kernel between `Sym^big` and `Sym^small` over the complement
/// sector `Sym^(big-small)`. `pairs[i_small][i_rest] = (i_big, weight)`.
pub(crate) struct TraceKernel {
    pub small: SymSector,
    pub rest: SymSector,
    pub big: SymSector,
    pub pairs: Vec<Vec<(usize, f64)>>,
}

impl TraceKernel {
    pub fn new(d: usize, n_big: u32, n_small: u32) -> Result<Self> {
        if n_small > n_big {
            return Err(Error::Domain { what: "partial trace target exceeds particle number" });
        }
        let small = SymSector::new(d, n_small)?;
        let rest = SymSector::new(d, n_big - n_small)?;
        let big = SymSector::new(d, n_big)?;
        let base = 0.5
            * (ln_factorial((n_big - n_small) as usize) + ln_factorial(n_small as usize)
                - ln_factorial(n_big as usize));
        let mut pairs = Vec::with_capacity(small.dim());
        let mut sum = alloc::vec![0u32; d];
        for a in small.basis() {
            let ln_a = ln_multi_factorial(a);
            let mut row = Vec::with_capacity(rest.dim());
            for r in rest.basis() {
                for i in 0..d {
                    sum[i] = a[i] + r[i];
                }
                let big_idx = big.position(&sum).unwrap();
                let w = Float::exp(
                    base + 0.5 * (ln_multi_factorial(&sum) - ln_a - ln_multi_factorial(r)),
                );
                row.push((big_idx, w));
            }
            pairs.push(row);
        }
        Ok(TraceKernel { small, rest, big, pairs })
    }

    /// Trace-preserving contraction `Sym^big → Sym^small`.
    pub fn contract(&self, gamma_big: &CMatrix) -> CMatrix {
        let dim = self.small.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for m in 0..dim {
            for mp in m..dim {
                let mut acc = C64::new(0.0, 0.0);
                for r in 0..self.rest.dim() {
                    let (i, wi) = self.pairs[m][r];
                    let (j, wj) = self.pairs[mp][r];
                    acc += gamma_big[(i, j)] * C64::new(wi * wj, 0.0);
                }
                out[(m, mp)] = acc;
                if mp != m {
                    out[(mp, m)] = acc.conj();
                }
            }
        }
        out
    }

    /// Adjoint of [`contract`](Self::contract) (no binomial prefactor).
    pub fn expand(&self, gamma_small: &CMatrix) -> CMatrix {
        let dim = self.big.dim();
        let mut out = CMatrix::zeros(dim, dim);
        for m in 0..self.small.dim() {
            for mp in 0..self.small.dim() {
                let g = gamma_small[(m, mp)];
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..self.rest.dim() {
                    let (i, wi) = self.pairs[m][r];
                    let (j, wj) = self.pairs[mp][r];
                    out[(i, j)] += g * C64::new(wi * wj, 0.0);
                }
            }
        }
        out
    }
}

/// Occupation-basis partial trace of a sector operator (trace-preserving).
pub fn partial_trace_matrix(sector: &SymSector, mat: &CMatrix, n: u32) -> Result<CMatrix> {
    if n > sector.particles() {
        return Err(Error::Domain { what: "partial trace target exceeds particle number" });
    }
    let kernel = TraceKernel::new(sector.modes(), sector.particles(), n)?;
    Ok(kernel.contract(mat))
}

/// Trace-norm distance `Σ |eig(A - B)|` between same-sector operators.
pub fn trace_norm_distance(a: &DensityOp, b: &DensityOp) -> Result<f64> {
    if a.sector() != b.sector() {
        return Err(Error::ShapeMismatch { expected: "operators on the same sector" });
    }
    Ok(linalg::trace_norm(&(a.matrix() - b.matrix())))
}

/// Wick-order diagonal `((N-n)!/N!) tr[a*(v)^n a(v)^n Γ]`.
///
/// Equals `⟨v^{⊗n}, γ^(n) v^{⊗n}⟩` with the trace-one convention for the
/// reduced matrix.
pub fn wick_diagonal(gamma: &DensityOp, v: &crate::CVector, n: u32) -> Result<f64> {
    let sector = gamma.sector();
    if n > sector.particles() {
        return Err(Error::Domain { what: "Wick order exceeds particle number" });
    }
    let norm = linalg::norm(v);
    if (norm - 1.0).abs() > TOL.unit_norm {
        return Err(Error::NotNormalized { norm });
    }
    let a_pow = annihilation_power(v, sector, n)?;
    let big_n = sector.particles() as usize;
    let scale = Float::exp(ln_factorial(big_n - n as usize) - ln_factorial(big_n));
    // tr[A† A Γ] = <A Γ, A> in Frobenius form; A Γ A† has real trace.
    let m = &a_pow * gamma.matrix() * a_pow.adjoint();
    Ok(scale * linalg::trace_re(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference;
    use crate::symspace::{creator_matrix, product_embed, random_sphere_point, OneBodyOp, TwoBodyOp};
    use crate::CVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn product_state_reduces_to_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (d, n_from, n_to) in [(2usize, 4u32, 2u32), (3, 3, 1), (2, 5, 3)] {
            let u = random_sphere_point(d, &mut rng);
            let gamma = DensityOp::from_ket(&product_embed(&u, n_from).unwrap());
            let reduced = gamma.partial_trace(n_to).unwrap();
            let expect = DensityOp::from_ket(&product_embed(&u, n_to).unwrap());
            let dist = trace_norm_distance(&reduced, &expect).unwrap();
            assert!(dist < 1e-11, "d={d} {n_from}->{n_to}: {dist:e}");
        }
    }

    #[test]
    fn two_body_superposition_reduces_to_mixture() {
        // (ψ⊗φ + φ⊗ψ)/√2 with ψ ⊥ φ: one-body matrix ½|ψ⟩⟨ψ| + ½|φ⟩⟨φ|.
        let d = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = random_sphere_point(d, &mut rng);
        // Orthogonalize a second random vector against psi.
        let mut phi = random_sphere_point(d, &mut rng);
        let overlap = linalg::inner(&psi, &phi);
        phi -= &psi * overlap;
        phi /= c(linalg::norm(&phi), 0.0);

        let vac = SymSector::new(d, 0).unwrap();
        let one = SymSector::new(d, 1).unwrap();
        let amps = creator_matrix(&psi, &one).unwrap()
            * creator_matrix(&phi, &vac).unwrap()
            * CVector::from_element(1, c(1.0, 0.0));
        let ket = Ket::new(SymSector::new(d, 2).unwrap(), amps).unwrap();
        let gamma = DensityOp::from_ket(&ket);
        let reduced = gamma.partial_trace(1).unwrap();
        let expect = (&psi * psi.adjoint() + &phi * phi.adjoint()) * c(0.5, 0.0);
        let res = (reduced.matrix() - expect).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-12, "{res:e}");
    }

    #[test]
    fn partial_trace_matches_full_tensor_reference() {
        for (d, n, keep, seed) in
            [(2usize, 3u32, 2u32, 10u64), (2, 4, 2, 11), (3, 3, 1, 12), (2, 3, 1, 13)]
        {
            let sector = SymSector::new(d, n).unwrap();
            let gamma = DensityOp::random(sector.clone(), sector.dim(), seed).unwrap();
            let fast = gamma.partial_trace(keep).unwrap();
            let slow = reference::partial_trace(&sector, gamma.matrix(), keep).unwrap();
            let res =
                (fast.matrix() - &slow).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(res < 1e-12, "d={d} N={n} n={keep}: {res:e}");
        }
    }

    #[test]
    fn partial_trace_rejects_bad_order() {
        let sector = SymSector::new(2, 2).unwrap();
        let gamma = DensityOp::maximally_mixed(sector);
        assert!(gamma.partial_trace(3).is_err());
    }

    #[test]
    fn partial_trace_consistency_chain() {
        // tr_{n+1}[γ^(n+1)] = γ^(n) for all m <= n <= N on random states.
        let sector = SymSector::new(2, 4).unwrap();
        for seed in 0..6u64 {
            let gamma = DensityOp::random(sector.clone(), 3, seed).unwrap();
            for n in 0..=4u32 {
                let direct = gamma.partial_trace(n).unwrap();
                for m in 0..=n {
                    let two_step = direct.partial_trace(m).unwrap();
                    let one_step = gamma.partial_trace(m).unwrap();
                    let dist = trace_norm_distance(&two_step, &one_step).unwrap();
                    assert!(dist < 1e-12, "seed={seed} n={n} m={m}: {dist:e}");
                }
            }
        }
    }

    #[test]
    fn partial_trace_preserves_positivity() {
        let sector = SymSector::new(3, 3).unwrap();
        for seed in 0..10u64 {
            let gamma = DensityOp::random(sector.clone(), 2, seed).unwrap();
            let reduced = gamma.partial_trace(2).unwrap();
            assert!(linalg::min_eigenvalue(reduced.matrix()) > -1e-10);
            assert!((reduced.trace() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_identity_via_reduced_matrices() {
        // tr[H_N Γ]/N = tr[h γ^(1)] + (λ(N-1)/2) tr[w γ^(2)].
        let d = 2;
        let n = 4u32;
        let lambda = 0.37;
        let h = OneBodyOp::random(d, 31);
        let w = TwoBodyOp::random(d, 32).unwrap();
        let ham = crate::symspace::assemble_hamiltonian(&h, &w, n, lambda).unwrap();
        let sector = SymSector::new(d, n).unwrap();
        for seed in 0..5u64 {
            let gamma = DensityOp::random(sector.clone(), 4, seed).unwrap();
            let lhs = linalg::frobenius_inner(&ham.adjoint(), gamma.matrix()).re / n as f64;
            let g1 = gamma.partial_trace(1).unwrap();
            let g2 = gamma.partial_trace(2).unwrap();
            let rhs = linalg::frobenius_inner(&h.matrix().adjoint(), g1.matrix()).re
                + 0.5 * lambda * (n as f64 - 1.0)
                    * linalg::frobenius_inner(&w.matrix().adjoint(), g2.matrix()).re;
            assert!((lhs - rhs).abs() < 1e-10, "seed={seed}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn trace_norm_examples() {
        let sector = SymSector::new(2, 1).unwrap();
        let x = DensityOp::new(
            sector.clone(),
            CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)])),
        )
        .unwrap();
        assert_eq!(trace_norm_distance(&x, &x).unwrap(), 0.0);
        let y = DensityOp::new(
            sector,
            CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![
                c(2.0 / 3.0, 0.0),
                c(1.0 / 3.0, 0.0)
            ])),
        )
        .unwrap();
        let dist = trace_norm_distance(&x, &y).unwrap();
        assert!((dist - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_triangle_inequality() {
        let sector = SymSector::new(2, 2).unwrap();
        for seed in 0..100u64 {
            let a = DensityOp::random(sector.clone(), 2, 3 * seed).unwrap();
            let b = DensityOp::random(sector.clone(), 2, 3 * seed + 1).unwrap();
            let cc = DensityOp::random(sector.clone(), 2, 3 * seed + 2).unwrap();
            let ab = trace_norm_distance(&a, &b).unwrap();
            let bc = trace_norm_distance(&b, &cc).unwrap();
            let ac = trace_norm_distance(&a, &cc).unwrap();
            assert!(ab + bc - ac >= -1e-12);
        }
    }

    #[test]
    fn trace_norm_rejects_sector_mismatch() {
        let a = DensityOp::maximally_mixed(SymSector::new(2, 1).unwrap());
        let b = DensityOp::maximally_mixed(SymSector::new(2, 2).unwrap());
        assert!(trace_norm_distance(&a, &b).is_err());
    }

    #[test]
    fn wick_diagonal_pure_product() {
        let e1 = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let e2 = CVector::from_vec(alloc::vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let gamma = DensityOp::from_ket(&product_embed(&e1, 2).unwrap());
        assert!((wick_diagonal(&gamma, &e1, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(wick_diagonal(&gamma, &e2, 1).unwrap().abs() < 1e-12);
    }

    #[test]
    fn wick_diagonal_matches_reduced_matrix() {
        let sector = SymSector::new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..8u64 {
            let gamma = DensityOp::random(sector.clone(), 3, seed).unwrap();
            let v = random_sphere_point(2, &mut rng);
            let lhs = wick_diagonal(&gamma, &v, 2).unwrap();
            let g2 = gamma.partial_trace(2).unwrap();
            let v2 = product_embed(&v, 2).unwrap();
            let rhs =
                (v2.amplitudes().adjoint() * g2.matrix() * v2.amplitudes())[(0, 0)].re;
            assert!((lhs - rhs).abs() < 1e-10, "seed={seed} {lhs} vs {rhs}");
        }
    }

    #[test]
    fn random_density_is_reproducible_and_valid() {
        let sector = SymSector::new(2, 3).unwrap();
        let a = DensityOp::random(sector.clone(), 2, 99).unwrap();
        let b = DensityOp::random(sector.clone(), 2, 99).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(DensityOp::random(sector.clone(), 5, 0).is_err());

        let pure = DensityOp::random(sector, 1, 5).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_density_mean_spectrum_approaches_flat() {
        // Full-rank draws average to Id/dim; check the averaged matrix's
        // spectrum against flat within 3 standard errors.
        let sector = SymSector::new(2, 2).unwrap();
        let dim = sector.dim();
        let draws = 1000;
        let mut mean = CMatrix::zeros(dim, dim);
        for seed in 0..draws {
            mean += DensityOp::random(sector.clone(), dim, seed).unwrap().matrix();
        }
        mean /= c(draws as f64, 0.0);
        // Entry fluctuations are O(1/sqrt(draws)); eigenvalues of the mean
        // inherit that scale (Weyl). 3 SE with SE ~ 1/sqrt(dim^2 draws)
        // per entry, aggregated conservatively:
        let se = 3.0 * (dim as f64) / ((draws as f64).sqrt() * dim as f64);
        let (vals, _) = linalg::eigh(&mean);
        for v in vals {
            assert!((v - 1.0 / dim as f64).abs() < se, "{v} vs flat, se={se}");
        }
    }
}
