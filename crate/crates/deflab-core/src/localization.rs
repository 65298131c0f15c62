//! Fock-space localization of an N-body state relative to an orthogonal
//! projector: the block decomposition `G_{N,k}`, the reduced-matrix
//! consistency relation and the particle-number duality.
//!
//! Blocks are computed in a mode basis adapted to the projector: with
//! `U = [B_P | B_Q]` (orthonormal bases of `ran P` and `ran P⊥`), the
//! rotated state's occupation entries split into P-mode and Q-mode counts
//! and `G_{N,k}` is the partial diagonal sum over Q-occupations at fixed
//! P-particle number `k`, compressed to `Sym^k(ran P)`.

use alloc::vec::Vec;

use crate::combin::binomial_f64;
use crate::error::{Error, Result};
use crate::linalg;
use crate::states::{DensityOp, TraceKernel};
use crate::symspace::{sector_unitary, SymSector};
use crate::tol::TOL;
use crate::{C64, CMatrix};

/// `d×d` orthogonal projector with a deterministic orthonormal basis of its
/// range and complement (from the sorted eigendecomposition).
#[derive(Debug, Clone)]
pub struct Projector {
    mat: CMatrix,
    rank: usize,
    /// `d × rank` basis of `ran P`.
    range: CMatrix,
    /// `d × (d-rank)` basis of `ran P⊥`.
    complement_range: CMatrix,
}

impl Projector {
    /// Validate `P² = P = P†` within the Hermitian tolerance.
    pub fn new(mat: CMatrix) -> Result<Self> {
        let d = mat.nrows();
        if mat.ncols() != d {
            return Err(Error::ShapeMismatch { expected: "square projector matrix" });
        }
        let herm = linalg::hermitian_residual(&mat);
        let idem = (&mat * &mat - &mat).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > TOL.hermitian || idem > TOL.hermitian {
            return Err(Error::NotProjector { residual: herm.max(idem) });
        }
        let (vals, vecs) = linalg::eigh(&mat);
        let rank = vals.iter().filter(|&&v| v > 0.5).count();
        // Ascending order: complement eigenvectors first, range last.
        let complement_range = vecs.columns(0, d - rank).into_owned();
        let range = vecs.columns(d - rank, rank).into_owned();
        Ok(Projector { mat, rank, range, complement_range })
    }

    /// Projector onto the span of the given (not necessarily orthonormal)
    /// vectors.
    pub fn from_span(d: usize, vectors: &[crate::CVector]) -> Result<Self> {
        let mut basis: Vec<crate::CVector> = Vec::new();
        for v in vectors {
            let mut w = v.clone();
            for b in &basis {
                let overlap = linalg::inner(b, &w);
                w -= b * overlap;
            }
            let n = linalg::norm(&w);
            if n > 1e-10 {
                basis.push(w / C64::new(n, 0.0));
            }
        }
        let mut mat = CMatrix::zeros(d, d);
        for b in &basis {
            mat += b * b.adjoint();
        }
        Projector::new(mat)
    }

    pub fn identity(d: usize) -> Self {
        Projector::new(linalg::eye(d)).unwrap()
    }

    pub fn zero(d: usize) -> Self {
        Projector::new(CMatrix::zeros(d, d)).unwrap()
    }

    pub fn complement(&self) -> Projector {
        Projector {
            mat: linalg::eye(self.modes()) - &self.mat,
            rank: self.modes() - self.rank,
            range: self.complement_range.clone(),
            complement_range: self.range.clone(),
        }
    }

    pub fn modes(&self) -> usize {
        self.mat.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Orthonormal basis of `ran P` (deterministic for a given `P`).
    pub fn range_basis(&self) -> &CMatrix {
        &self.range
    }
}

/// Diagonal truncated-Fock-space state: sub-normalized positive blocks
/// `G_{N,k}` on `Sym^k(ran P)`, `k = 0..N`, of total trace one.
#[derive(Debug, Clone)]
pub struct FockBlocks {
    /// Rank of the localizing projector (mode count of the blocks).
    pub range_rank: usize,
    pub n_particles: u32,
    /// `blocks[k]` acts on `Sym^k(C^rank)`; empty (0×0) when that sector
    /// is trivial (`rank = 0`, `k > 0`).
    pub blocks: Vec<CMatrix>,
}

impl FockBlocks {
    fn validate(&self) -> Result<()> {
        let mut total = 0.0;
        for b in &self.blocks {
            if b.nrows() > 0 {
                let min = linalg::min_eigenvalue(b);
                if min < -TOL.psd {
                    return Err(Error::NotPositive { min_eigenvalue: min });
                }
                total += linalg::trace_re(b);
            }
        }
        if (total - 1.0).abs() > TOL.trace_one {
            return Err(Error::TraceNotOne { trace: total });
        }
        Ok(())
    }

    /// Trace of each block (the particle-number distribution).
    pub fn traces(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| if b.nrows() > 0 { linalg::trace_re(b) } else { 0.0 })
            .collect()
    }

    pub fn total_trace(&self) -> f64 {
        self.traces().iter().sum()
    }

    /// Reduced matrix of the diagonal Fock state:
    /// `C(N,n)^{-1} Σ_{k≥n} C(k,n) tr_{n+1→k} G_k` on `Sym^n(ran P)`.
    pub fn reduced_matrix(&self, n: u32) -> Result<CMatrix> {
        if self.range_rank == 0 {
            return if n == 0 {
                Ok(self.blocks[0].clone())
            } else {
                Err(Error::Domain { what: "rank-0 localization has no n ≥ 1 marginals" })
            };
        }
        let out_dim = SymSector::new(self.range_rank, n)?.dim();
        let mut acc = CMatrix::zeros(out_dim, out_dim);
        for (k, block) in self.blocks.iter().enumerate() {
            let k = k as u32;
            if k < n || block.nrows() == 0 {
                continue;
            }
            let kernel = TraceKernel::new(self.range_rank, k, n)?;
            acc += kernel.contract(block) * C64::new(binomial_f64(k as usize, n as usize), 0.0);
        }
        acc /= C64::new(binomial_f64(self.n_particles as usize, n as usize), 0.0);
        Ok(acc)
    }
}

/// Localize an N-body state relative to an orthogonal projector:
/// `G_{N,k} = C(N,k) tr_{k+1→N}[(P^{⊗k}⊗P⊥^{⊗(N-k)}) Γ (P^{⊗k}⊗P⊥^{⊗(N-k)})]`,
/// compressed to `Sym^k(ran P)`.
pub fn localize(gamma: &DensityOp, p: &Projector) -> Result<FockBlocks> {
    let sector = gamma.sector();
    let d = sector.modes();
    if p.modes() != d {
        return Err(Error::ShapeMismatch { expected: "projector on the sector's modes" });
    }
    let n = sector.particles();
    let rank = p.rank();

    if rank == 0 {
        let mut blocks = alloc::vec![CMatrix::zeros(0, 0); n as usize + 1];
        blocks[0] = CMatrix::from_element(1, 1, C64::new(gamma.trace(), 0.0));
        let out = FockBlocks { range_rank: 0, n_particles: n, blocks };
        out.validate()?;
        return Ok(out);
    }

    // Rotate into the adapted mode basis [B_P | B_Q].
    let d_q = d - rank;
    let mut u = CMatrix::zeros(d, d);
    u.view_mut((0, 0), (d, rank)).copy_from(p.range_basis());
    u.view_mut((0, rank), (d, d_q)).copy_from(&p.complement_range);
    let s = sector_unitary(&u, n)?;
    let rotated = s.adjoint() * gamma.matrix() * &s;

    let q_sectors: Vec<Option<SymSector>> = (0..=n)
        .map(|k| {
            if d_q == 0 {
                None
            } else {
                Some(SymSector::new(d_q, n - k).unwrap())
            }
        })
        .collect();
    let mut blocks = Vec::with_capacity(n as usize + 1);
    let mut full_index = alloc::vec![0u32; d];
    for k in 0..=n {
        let p_sector = SymSector::new(rank, k)?;
        let dim_k = p_sector.dim();
        let mut block = CMatrix::zeros(dim_k, dim_k);
        if d_q == 0 {
            // P has full rank: everything sits in the block k = N.
            if k == n {
                block.copy_from(&rotated);
            }
        } else {
            let q_sector = q_sectors[k as usize].as_ref().unwrap();
            for (ia, a) in p_sector.basis().iter().enumerate() {
                for (ib, b) in p_sector.basis().iter().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for r in q_sector.basis() {
                        full_index[..rank].copy_from_slice(a);
                        full_index[rank..].copy_from_slice(r);
                        let row = sector.position(&full_index).unwrap();
                        full_index[..rank].copy_from_slice(b);
                        let col = sector.position(&full_index).unwrap();
                        acc += rotated[(row, col)];
                    }
                    block[(ia, ib)] = acc;
                }
            }
        }
        blocks.push(block);
    }
    let out = FockBlocks { range_rank: rank, n_particles: n, blocks };
    out.validate()?;
    Ok(out)
}

/// Residual of the consistency relation: trace distance between
/// `P^{⊗n} γ^(n) P^{⊗n}` (compressed to `Sym^n(ran P)`) and the reduced
/// matrix of the localized blocks.
pub fn check_consistency(gamma: &DensityOp, p: &Projector, n: u32) -> Result<f64> {
    let sector = gamma.sector();
    if n > sector.particles() {
        return Err(Error::Domain { what: "consistency order exceeds particle number" });
    }
    let blocks = localize(gamma, p)?;
    let rank = p.rank();
    if rank == 0 {
        // P γ P = 0 for n ≥ 1; the blocks carry no n ≥ 1 marginal either.
        return Ok(0.0);
    }
    let lhs = {
        let reduced = gamma.partial_trace(n)?;
        let d = sector.modes();
        let d_q = d - rank;
        let mut u = CMatrix::zeros(d, d);
        u.view_mut((0, 0), (d, rank)).copy_from(p.range_basis());
        u.view_mut((0, rank), (d, d_q)).copy_from(&p.complement_range);
        let s = sector_unitary(&u, n)?;
        let rotated = s.adjoint() * reduced.matrix() * &s;
        // Compression: keep occupations supported on the P-modes.
        let small = SymSector::new(rank, n)?;
        let big = SymSector::new(d, n)?;
        let mut compressed = CMatrix::zeros(small.dim(), small.dim());
        let mut full_index = alloc::vec![0u32; d];
        for (ia, a) in small.basis().iter().enumerate() {
            for (ib, b) in small.basis().iter().enumerate() {
                full_index.iter_mut().for_each(|x| *x = 0);
                full_index[..rank].copy_from_slice(a);
                let row = big.position(&full_index).unwrap();
                full_index.iter_mut().for_each(|x| *x = 0);
                full_index[..rank].copy_from_slice(b);
                let col = big.position(&full_index).unwrap();
                compressed[(ia, ib)] = rotated[(row, col)];
            }
        }
        compressed
    };
    let rhs = blocks.reduced_matrix(n)?;
    Ok(linalg::trace_norm(&(lhs - rhs)))
}

/// Max over `k` of `|tr G_{N,k}^P - tr G_{N,N-k}^{P⊥}|`.
pub fn check_duality(gamma: &DensityOp, p: &Projector) -> Result<f64> {
    let blocks_p = localize(gamma, p)?;
    let blocks_q = localize(gamma, &p.complement())?;
    let tr_p = blocks_p.traces();
    let tr_q = blocks_q.traces();
    let n = gamma.sector().particles() as usize;
    let mut worst = 0.0f64;
    for k in 0..=n {
        worst = worst.max((tr_p[k] - tr_q[n - k]).abs());
    }
    Ok(worst)
}
