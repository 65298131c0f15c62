//! Slow, transparent full-tensor implementations used to cross-validate the
//! occupation-basis fast paths.
//!
//! Everything here works on the full tensor space `(C^d)^{⊗N}` (dimension
//! `d^N`, capped by [`crate::tol::Tolerances::tensor_cap`]) and is kept
//! independent of the formulas it validates: partial traces sum tensor
//! indices directly, Hamiltonians are built from `h_j` and `w_ij` placed on
//! explicit slots, symmetric padding sums over position subsets.

use alloc::vec::Vec;

use num_traits::Float;

use crate::combin::{binomial, ln_factorial, ln_multi_factorial};
use crate::error::{Error, Result};
use crate::linalg;
use crate::symspace::{OneBodyOp, SymSector, TwoBodyOp};
use crate::tol::TOL;
use crate::{C64, CMatrix};

fn checked_pow(d: usize, n: u32) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(d).ok_or(Error::Capacity {
            what: "full tensor dimension",
            required: u128::MAX,
            cap: TOL.tensor_cap as u128,
        })?;
        if acc > TOL.tensor_cap {
            return Err(Error::Capacity {
                what: "full tensor dimension",
                required: acc as u128,
                cap: TOL.tensor_cap as u128,
            });
        }
    }
    Ok(acc)
}

/// Digits `(i_1,...,i_N)` of a full-tensor basis index, first factor most
/// significant.
fn digits(mut x: usize, d: usize, n: u32, out: &mut [usize]) {
    for k in (0..n as usize).rev() {
        out[k] = x % d;
        x /= d;
    }
}

/// Isometry `J_N : Sym^N(C^d) → (C^d)^{⊗N}` mapping the occupation basis to
/// normalized symmetrized product vectors.
pub fn sector_isometry(sector: &SymSector) -> Result<CMatrix> {
    let d = sector.modes();
    let n = sector.particles();
    let full = checked_pow(d, n)?;
    let mut j = CMatrix::zeros(full, sector.dim());
    let mut dig = alloc::vec![0usize; n as usize];
    let mut occ = alloc::vec![0u32; d];
    let ln_n = ln_factorial(n as usize);
    for x in 0..full {
        digits(x, d, n, &mut dig);
        occ.iter_mut().for_each(|o| *o = 0);
        for &i in dig.iter() {
            occ[i] += 1;
        }
        let col = sector.position(&occ).unwrap();
        let coeff = Float::exp(0.5 * (ln_multi_factorial(&occ) - ln_n));
        j[(x, col)] = C64::new(coeff, 0.0);
    }
    Ok(j)
}

/// Embed a sector operator into the full tensor space: `J A J†`.
pub fn embed_operator(sector: &SymSector, a: &CMatrix) -> Result<CMatrix> {
    let j = sector_isometry(sector)?;
    Ok(&j * a * j.adjoint())
}

/// Partial trace over the last `N-n` tensor factors of a full-tensor
/// operator, by direct index summation.
pub fn full_partial_trace(gamma_full: &CMatrix, d: usize, n_total: u32, n_keep: u32) -> CMatrix {
    let keep_dim = d.pow(n_keep);
    let rest_dim = d.pow(n_total - n_keep);
    let mut out = CMatrix::zeros(keep_dim, keep_dim);
    for a in 0..keep_dim {
        for b in 0..keep_dim {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..rest_dim {
                acc += gamma_full[(a * rest_dim + t, b * rest_dim + t)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Compress a full-tensor operator back to the symmetric sector: `J† A J`.
pub fn compress_operator(sector: &SymSector, a_full: &CMatrix) -> Result<CMatrix> {
    let j = sector_isometry(sector)?;
    Ok(j.adjoint() * a_full * j)
}

/// Reference partial trace of a sector operator: embed, trace out the last
/// factors index-by-index, compress.
pub fn partial_trace(sector: &SymSector, gamma: &CMatrix, n_keep: u32) -> Result<CMatrix> {
    let full = embed_operator(sector, gamma)?;
    let reduced_full =
        full_partial_trace(&full, sector.modes(), sector.particles(), n_keep);
    let reduced_sector = SymSector::new(sector.modes(), n_keep)?;
    compress_operator(&reduced_sector, &reduced_full)
}

/// One-body operator placed on tensor slot `slot` of `(C^d)^{⊗N}`.
fn place_one_body(h: &CMatrix, d: usize, n: u32, slot: usize) -> Result<CMatrix> {
    let full = checked_pow(d, n)?;
    let mut out = CMatrix::zeros(full, full);
    let stride = d.pow(n - 1 - slot as u32);
    for x in 0..full {
        let xi = (x / stride) % d;
        for a in 0..d {
            let hval = h[(a, xi)];
            if hval == C64::new(0.0, 0.0) {
                continue;
            }
            out[(x - xi * stride + a * stride, x)] += hval;
        }
    }
    Ok(out)
}

/// Two-body operator placed on slots `(s1, s2)` of `(C^d)^{⊗N}`.
fn place_two_body(w: &TwoBodyOp, d: usize, n: u32, s1: usize, s2: usize) -> Result<CMatrix> {
    let full = checked_pow(d, n)?;
    let mut out = CMatrix::zeros(full, full);
    let str1 = d.pow(n - 1 - s1 as u32);
    let str2 = d.pow(n - 1 - s2 as u32);
    for x in 0..full {
        let r = (x / str1) % d;
        let s = (x / str2) % d;
        let base = x - r * str1 - s * str2;
        for p in 0..d {
            for q in 0..d {
                let val = w.tensor_element(p, q, r, s);
                if val == C64::new(0.0, 0.0) {
                    continue;
                }
                out[(base + p * str1 + q * str2, x)] += val;
            }
        }
    }
    Ok(out)
}

/// Reference Hamiltonian `Σ_j h_j + λ Σ_{i<j} w_ij` on the full tensor
/// space, compressed to the symmetric sector.
pub fn hamiltonian(
    h: &OneBodyOp,
    w: &TwoBodyOp,
    n_particles: u32,
    lambda: f64,
) -> Result<CMatrix> {
    let d = h.modes();
    let full = checked_pow(d, n_particles)?;
    let mut ham = CMatrix::zeros(full, full);
    for j in 0..n_particles as usize {
        ham += place_one_body(h.matrix(), d, n_particles, j)?;
    }
    if n_particles >= 2 {
        let lam = C64::new(lambda, 0.0);
        for i in 0..n_particles as usize {
            for j in (i + 1)..n_particles as usize {
                ham += place_two_body(w, d, n_particles, i, j)? * lam;
            }
        }
    }
    let sector = SymSector::new(d, n_particles)?;
    compress_operator(&sector, &ham)
}

/// Reference symmetric padding `γ ⊗_s Id^{⊗(n-ℓ)}`: sum of `(γ on slots S)
/// ⊗ (identity elsewhere)` over all `C(n, ℓ)` position subsets `S`,
/// compressed to the symmetric sector.
pub fn sym_pad(gamma: &CMatrix, sector_l: &SymSector, n_target: u32) -> Result<CMatrix> {
    let d = sector_l.modes();
    let l = sector_l.particles();
    if l > n_target {
        return Err(Error::Domain { what: "padding target below operator order" });
    }
    let full_n = checked_pow(d, n_target)?;
    let full_l = d.pow(l);
    let gamma_full = embed_operator(sector_l, gamma)?;
    let mut acc = CMatrix::zeros(full_n, full_n);
    let mut slots: Vec<usize> = (0..l as usize).collect();
    let mut digx = alloc::vec![0usize; n_target as usize];
    let mut digy = alloc::vec![0usize; n_target as usize];
    loop {
        // Add gamma placed on `slots`, identity elsewhere.
        for x in 0..full_n {
            digits(x, d, n_target, &mut digx);
            for y in 0..full_n {
                digits(y, d, n_target, &mut digy);
                let mut same_elsewhere = true;
                for k in 0..n_target as usize {
                    if !slots.contains(&k) && digx[k] != digy[k] {
                        same_elsewhere = false;
                        break;
                    }
                }
                if !same_elsewhere {
                    continue;
                }
                let mut g_row = 0usize;
                let mut g_col = 0usize;
                for &sl in slots.iter() {
                    g_row = g_row * d + digx[sl];
                    g_col = g_col * d + digy[sl];
                }
                debug_assert!(g_row < full_l && g_col < full_l);
                acc[(x, y)] += gamma_full[(g_row, g_col)];
            }
        }
        if !next_combination(&mut slots, n_target as usize) {
            break;
        }
    }
    let sector_n = SymSector::new(d, n_target)?;
    compress_operator(&sector_n, &acc)
}

/// Advance `slots` to the next size-`k` combination of `{0..n-1}`;
/// returns false after the last one.
fn next_combination(slots: &mut [usize], n: usize) -> bool {
    let k = slots.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if slots[i] != i + n - k {
            slots[i] += 1;
            for j in (i + 1)..k {
                slots[j] = slots[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Reference Fock-space localization blocks
/// `G_k = C(N,k) tr_{k+1..N}[(P^{⊗k}⊗Q^{⊗(N-k)}) Γ (P^{⊗k}⊗Q^{⊗(N-k)})]`,
/// compressed to `Sym^k(ran P)` in the orthonormal basis `basis_p`
/// (`d × rank` matrix with the range basis as columns).
pub fn localize_blocks(
    sector: &SymSector,
    gamma: &CMatrix,
    p: &CMatrix,
    basis_p: &CMatrix,
) -> Result<Vec<CMatrix>> {
    let d = sector.modes();
    let n = sector.particles();
    let _ = checked_pow(d, n)?;
    let q = linalg::eye(d) - p;
    let gamma_full = embed_operator(sector, gamma)?;
    let mut blocks = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        // Pi = P^{(x)k} (x) Q^{(x)(N-k)}
        let mut pi = linalg::eye(1);
        for _ in 0..k {
            pi = linalg::kron(&pi, p);
        }
        for _ in 0..(n - k) {
            pi = linalg::kron(&pi, &q);
        }
        let projected = &pi * &gamma_full * pi.adjoint();
        let reduced = full_partial_trace(&projected, d, n, k);
        // Compress to Sym^k(ran P): columns are B_P^{(x)k} J_k |m>.
        let rank = basis_p.ncols();
        let sub_sector = SymSector::new(rank.max(1), k)?;
        let iso = if rank == 0 {
            CMatrix::zeros(1, 1)
        } else {
            sector_isometry(&sub_sector)?
        };
        let mut bk_pow = linalg::eye(1);
        for _ in 0..k {
            bk_pow = linalg::kron(&bk_pow, basis_p);
        }
        let embed = &bk_pow * &iso;
        let scale = C64::new(binomial(n as usize, k as usize)? as f64, 0.0);
        let block = if rank == 0 && k > 0 {
            CMatrix::zeros(0, 0)
        } else {
            embed.adjoint() * &reduced * &embed * scale
        };
        blocks.push(block);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::product_embed;
    use crate::CVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn isometry_columns_are_orthonormal() {
        let sector = SymSector::new(3, 3).unwrap();
        let j = sector_isometry(&sector).unwrap();
        let gram = j.adjoint() * &j;
        let res = (&gram - linalg::eye(sector.dim()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(res < 1e-12, "{res:e}");
    }

    #[test]
    fn embedding_matches_product_embed() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = crate::symspace::random_sphere_point(2, &mut rng);
        let ket = product_embed(&u, 3).unwrap();
        let j = sector_isometry(ket.sector()).unwrap();
        let full = &j * ket.amplitudes();
        // Compare against the literal tensor power of u.
        let d = 2usize;
        let mut expect = CVector::zeros(8);
        for x in 0..8usize {
            let mut dig = [0usize; 3];
            digits(x, d, 3, &mut dig);
            expect[x] = u[dig[0]] * u[dig[1]] * u[dig[2]];
        }
        let res = (&full - &expect).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-12, "{res:e}");
    }

    #[test]
    fn combination_iterator_counts() {
        let mut slots: Vec<usize> = (0..2).collect();
        let mut count = 1;
        while next_combination(&mut slots, 4) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
