//! Occupation-number bases for bosonic sectors, product-vector embedding,
//! creation/annihilation operators and mean-field Hamiltonian assembly.
//!
//! A sector `Sym^N(C^d)` is described by its occupation basis: multi-indices
//! `(n_1,...,n_d)` with `Σ n_i = N`, ordered lexicographically *descending*
//! so that indexing is deterministic and output files are reproducible. The
//! dimension is `C(N+d-1, d-1)`.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::combin::{binomial_u128, ln_factorial, ln_multi_factorial, multiset_indices};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tol::TOL;
use crate::{C64, CMatrix, CVector};

/// Dimension of the bosonic sector `Sym^N(C^d)`: `C(N+d-1, d-1)`.
///
/// Overflow is detected and reported as a capacity error, never wrapped;
/// dimensions beyond `cap` are rejected.
pub fn sector_dimension_capped(d: usize, n: u32, cap: usize) -> Result<usize> {
    if d == 0 {
        return Err(Error::Domain { what: "mode count d must be positive" });
    }
    let dim = binomial_u128((n as u128) + (d as u128) - 1, (d as u128) - 1).ok_or(
        Error::Capacity { what: "sector dimension", required: u128::MAX, cap: cap as u128 },
    )?;
    if dim > cap as u128 {
        return Err(Error::Capacity { what: "sector dimension", required: dim, cap: cap as u128 });
    }
    Ok(dim as usize)
}

/// [`sector_dimension_capped`] with the default cap from [`TOL`].
pub fn sector_dimension(d: usize, n: u32) -> Result<usize> {
    sector_dimension_capped(d, n, TOL.dim_cap)
}

#[derive(Debug)]
struct SectorInner {
    d: usize,
    n_particles: u32,
    basis: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
}

/// Occupation-number basis descriptor of the `N`-particle sector over `d`
/// modes. Cheap to clone (shared immutable payload), safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct SymSector(Arc<SectorInner>);

impl PartialEq for SymSector {
    fn eq(&self, other: &Self) -> bool {
        self.0.d == other.0.d && self.0.n_particles == other.0.n_particles
    }
}

impl SymSector {
    /// Build the sector, enumerating its basis in lex-descending order.
    pub fn new(d: usize, n_particles: u32) -> Result<Self> {
        let dim = sector_dimension(d, n_particles)?;
        let basis = multiset_indices(d, n_particles);
        debug_assert_eq!(basis.len(), dim);
        let index: BTreeMap<Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(SymSector(Arc::new(SectorInner { d, n_particles, basis, index })))
    }

    /// Mode count `d`.
    pub fn modes(&self) -> usize {
        self.0.d
    }

    /// Particle number `N`.
    pub fn particles(&self) -> u32 {
        self.0.n_particles
    }

    /// Sector dimension.
    pub fn dim(&self) -> usize {
        self.0.basis.len()
    }

    /// Occupation multi-index of basis state `i`.
    pub fn occupation(&self, i: usize) -> &[u32] {
        &self.0.basis[i]
    }

    /// All occupation multi-indices in basis order.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.0.basis
    }

    /// Position of a multi-index in the basis (round-trip exact).
    pub fn position(&self, m: &[u32]) -> Option<usize> {
        self.0.index.get(m).copied()
    }

    /// Sector with one particle less (same modes).
    pub fn lowered(&self) -> Result<SymSector> {
        if self.particles() == 0 {
            return Err(Error::Domain { what: "annihilator requested on the vacuum sector" });
        }
        SymSector::new(self.modes(), self.particles() - 1)
    }

    /// Sector with one particle more (same modes).
    pub fn raised(&self) -> Result<SymSector> {
        SymSector::new(self.modes(), self.particles() + 1)
    }
}

/// Normalized state vector on a sector.
#[derive(Debug, Clone)]
pub struct Ket {
    sector: SymSector,
    amps: CVector,
}

impl Ket {
    /// Validate the squared-amplitude sum against the unit-norm tolerance.
    pub fn new(sector: SymSector, amps: CVector) -> Result<Self> {
        if amps.len() != sector.dim() {
            return Err(Error::ShapeMismatch { expected: "amplitude length = sector dimension" });
        }
        let norm = linalg::norm(&amps);
        if (norm - 1.0).abs() > 1e-12_f64.max(TOL.unit_norm) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Ket { sector, amps })
    }

    pub fn sector(&self) -> &SymSector {
        &self.sector
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// Rank-one density matrix `|ψ⟩⟨ψ|`.
    pub fn projector_matrix(&self) -> CMatrix {
        &self.amps * self.amps.adjoint()
    }
}

/// `d×d` one-body operator, validated Hermitian on construction.
#[derive(Debug, Clone)]
pub struct OneBodyOp {
    mat: CMatrix,
}

impl OneBodyOp {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::ShapeMismatch { expected: "square one-body matrix" });
        }
        let res = linalg::hermitian_residual(&mat);
        if res > TOL.hermitian {
            return Err(Error::NotHermitian { residual: res });
        }
        Ok(OneBodyOp { mat })
    }

    /// Diagonal one-body operator.
    pub fn diagonal(entries: &[f64]) -> Self {
        let d = entries.len();
        let mut mat = CMatrix::zeros(d, d);
        for (i, &v) in entries.iter().enumerate() {
            mat[(i, i)] = C64::new(v, 0.0);
        }
        OneBodyOp { mat }
    }

    /// Zero operator on `d` modes.
    pub fn zero(d: usize) -> Self {
        OneBodyOp { mat: CMatrix::zeros(d, d) }
    }

    /// Random Hermitian matrix with Gaussian entries, reproducible per seed.
    pub fn random(d: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_hermitian(d, &mut rng);
        OneBodyOp { mat }
    }

    pub fn modes(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Two-body operator given as a Hermitian matrix on the symmetric 2-sector;
/// exchange symmetry `w(u⊗v) = w(v⊗u)` is built in by construction.
#[derive(Debug, Clone)]
pub struct TwoBodyOp {
    sector: SymSector,
    mat: CMatrix,
}

impl TwoBodyOp {
    pub fn new(d: usize, mat: CMatrix) -> Result<Self> {
        let sector = SymSector::new(d, 2)?;
        if mat.nrows() != sector.dim() || mat.ncols() != sector.dim() {
            return Err(Error::ShapeMismatch { expected: "matrix on SymSector(d, 2)" });
        }
        let res = linalg::hermitian_residual(&mat);
        if res > TOL.hermitian {
            return Err(Error::NotHermitian { residual: res });
        }
        Ok(TwoBodyOp { sector, mat })
    }

    /// Zero interaction on `d` modes.
    pub fn zero(d: usize) -> Result<Self> {
        let sector = SymSector::new(d, 2)?;
        let dim = sector.dim();
        Ok(TwoBodyOp { sector, mat: CMatrix::zeros(dim, dim) })
    }

    /// `g · |e_i⊗e_i⟩⟨e_i⊗e_i|`: contact interaction in mode `i`.
    pub fn contact(d: usize, mode: usize, g: f64) -> Result<Self> {
        let sector = SymSector::new(d, 2)?;
        let dim = sector.dim();
        let mut m = alloc::vec![0u32; d];
        m[mode] = 2;
        let pos = sector.position(&m).ok_or(Error::Domain { what: "mode out of range" })?;
        let mut mat = CMatrix::zeros(dim, dim);
        mat[(pos, pos)] = C64::new(g, 0.0);
        Ok(TwoBodyOp { sector, mat })
    }

    /// Random Hermitian two-body operator, reproducible per seed.
    pub fn random(d: usize, seed: u64) -> Result<Self> {
        let sector = SymSector::new(d, 2)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mat = random_hermitian(sector.dim(), &mut rng);
        Ok(TwoBodyOp { sector, mat })
    }

    pub fn modes(&self) -> usize {
        self.sector.modes()
    }

    /// The defining matrix on `SymSector(d, 2)`.
    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn sector(&self) -> &SymSector {
        &self.sector
    }

    /// Full-tensor matrix element `⟨e_p⊗e_q| w |e_r⊗e_s⟩`.
    pub fn tensor_element(&self, p: usize, q: usize, r: usize, s: usize) -> C64 {
        let d = self.modes();
        let idx = |a: usize, b: usize| -> (usize, f64) {
            let mut m = alloc::vec![0u32; d];
            m[a] += 1;
            m[b] += 1;
            let pos = self.sector.position(&m).unwrap();
            let coeff = if a == b { 1.0 } else { core::f64::consts::FRAC_1_SQRT_2 };
            (pos, coeff)
        };
        let (i, ci) = idx(p, q);
        let (j, cj) = idx(r, s);
        self.mat[(i, j)] * C64::new(ci * cj, 0.0)
    }
}

/// Gaussian Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    let g = random_gaussian_matrix(n, n, rng);
    linalg::hermitize(&g)
}

/// Matrix with iid standard complex Gaussian entries.
pub fn random_gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Random point of the unit sphere of `C^d` (normalized complex Gaussian).
pub fn random_sphere_point(d: usize, rng: &mut impl Rng) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        let n = linalg::norm(&v);
        if n > 1e-6 {
            return v / C64::new(n, 0.0);
        }
    }
}

/// Embed a normalized one-body vector as the product state `u^{⊗N}`.
///
/// The coordinate on occupation `(n_1,...,n_d)` is
/// `sqrt(N!/(n_1!...n_d!)) · Π u_i^{n_i}`.
pub fn product_embed(u: &CVector, n_particles: u32) -> Result<Ket> {
    let norm = linalg::norm(u);
    if (norm - 1.0).abs() > TOL.unit_norm {
        return Err(Error::NotNormalized { norm });
    }
    let sector = SymSector::new(u.len(), n_particles)?;
    let ln_n = ln_factorial(n_particles as usize);
    let amps = CVector::from_fn(sector.dim(), |i, _| {
        let m = sector.occupation(i);
        let scale = Float::exp(0.5 * (ln_n - ln_multi_factorial(m)));
        let mut z = C64::new(scale, 0.0);
        for (k, &mk) in m.iter().enumerate() {
            for _ in 0..mk {
                z *= u[k];
            }
        }
        z
    });
    // Renormalize away the last few ulps so downstream checks stay exact.
    let a_norm = linalg::norm(&amps);
    Ket::new(sector, amps / C64::new(a_norm, 0.0))
}

/// Matrix of the annihilator `a(f): Sym^N → Sym^{N-1}`.
///
/// Antilinear in `f`: `a(f) = Σ_i conj(f_i) a_i` with
/// `a_i |..n_i..⟩ = sqrt(n_i) |..n_i-1..⟩`. Errors on the vacuum sector.
pub fn annihilator_matrix(f: &CVector, sector: &SymSector) -> Result<CMatrix> {
    if f.len() != sector.modes() {
        return Err(Error::ShapeMismatch { expected: "f lives on the sector's one-body space" });
    }
    let lower = sector.lowered()?;
    let mut mat = CMatrix::zeros(lower.dim(), sector.dim());
    let d = sector.modes();
    let mut scratch: Vec<u32> = alloc::vec![0; d];
    for (col, m) in sector.basis().iter().enumerate() {
        for i in 0..d {
            if m[i] == 0 {
                continue;
            }
            scratch.copy_from_slice(m);
            scratch[i] -= 1;
            let row = lower.position(&scratch).unwrap();
            mat[(row, col)] += f[i].conj() * C64::new(Float::sqrt(m[i] as f64), 0.0);
        }
    }
    Ok(mat)
}

/// Matrix of the creator `a*(f): Sym^N → Sym^{N+1}` (adjoint of `a(f)`).
pub fn creator_matrix(f: &CVector, sector: &SymSector) -> Result<CMatrix> {
    let upper = sector.raised()?;
    let a = annihilator_matrix(f, &upper)?;
    Ok(a.adjoint())
}

/// Matrix of `a(f)^k : Sym^N → Sym^{N-k}`.
pub fn annihilation_power(f: &CVector, sector: &SymSector, k: u32) -> Result<CMatrix> {
    if k > sector.particles() {
        return Err(Error::Domain { what: "annihilation power exceeds particle number" });
    }
    let mut current = sector.clone();
    let mut acc = linalg::eye(sector.dim());
    for _ in 0..k {
        let a = annihilator_matrix(f, &current)?;
        acc = &a * acc;
        current = current.lowered()?;
    }
    Ok(acc)
}

/// Sector representation `Sym^N(U)` of a one-body unitary `U`.
///
/// Column `m` is `Π_i a*(U e_i)^{m_i} |vac⟩ / sqrt(m!)`, built by repeated
/// application of creators; unitary whenever `U` is.
pub fn sector_unitary(u: &CMatrix, n_particles: u32) -> Result<CMatrix> {
    let d = u.nrows();
    if u.ncols() != d {
        return Err(Error::ShapeMismatch { expected: "square one-body unitary" });
    }
    let sector = SymSector::new(d, n_particles)?;
    // Creator matrices for each transformed mode, per level.
    let levels: Vec<SymSector> =
        (0..=n_particles).map(|k| SymSector::new(d, k)).collect::<Result<_>>()?;
    let cols: Vec<CVector> = (0..d).map(|i| u.column(i).into_owned()).collect();
    let mut out = CMatrix::zeros(sector.dim(), sector.dim());
    for (col, m) in sector.basis().iter().enumerate() {
        let mut vec = CVector::from_element(1, C64::new(1.0, 0.0));
        let mut level = 0usize;
        for (i, &mi) in m.iter().enumerate() {
            for _ in 0..mi {
                let cre = creator_matrix(&cols[i], &levels[level])?;
                vec = cre * vec;
                level += 1;
            }
        }
        let scale = Float::exp(-0.5 * ln_multi_factorial(m));
        out.set_column(col, &(vec * C64::new(scale, 0.0)));
    }
    Ok(out)
}

/// Assemble the mean-field Hamiltonian `Σ_j h_j + λ Σ_{i<j} w_ij` on the
/// occupation basis of `Sym^N(C^d)` via second quantization:
/// `h` enters as `Σ_{pq} h_{pq} a*_p a_q`, `w` through its full-tensor matrix
/// elements contracted with `a*a*aa`. For `N = 1` the interaction term is
/// absent regardless of `λ`.
pub fn assemble_hamiltonian(
    h: &OneBodyOp,
    w: &TwoBodyOp,
    n_particles: u32,
    lambda: f64,
) -> Result<CMatrix> {
    let d = h.modes();
    if w.modes() != d {
        return Err(Error::ShapeMismatch { expected: "h and w on the same one-body space" });
    }
    if n_particles == 0 {
        return Err(Error::Domain { what: "Hamiltonian needs at least one particle" });
    }
    let sector = SymSector::new(d, n_particles)?;
    let dim = sector.dim();
    let mut ham = CMatrix::zeros(dim, dim);
    let hm = h.matrix();

    let mut scratch: Vec<u32> = alloc::vec![0; d];
    // One-body part: a*_p a_q |m⟩.
    for (col, m) in sector.basis().iter().enumerate() {
        for q in 0..d {
            if m[q] == 0 {
                continue;
            }
            let cq = Float::sqrt(m[q] as f64);
            for p in 0..d {
                if hm[(p, q)] == C64::new(0.0, 0.0) {
                    continue;
                }
                scratch.copy_from_slice(m);
                scratch[q] -= 1;
                let cp = Float::sqrt((scratch[p] + 1) as f64);
                scratch[p] += 1;
                let row = sector.position(&scratch).unwrap();
                ham[(row, col)] += hm[(p, q)] * C64::new(cp * cq, 0.0);
            }
        }
    }

    // Two-body part: (λ/2) Σ_{pqrs} W_{pq,rs} a*_p a*_q a_s a_r |m⟩.
    if n_particles >= 2 && w.matrix().iter().any(|z| *z != C64::new(0.0, 0.0)) {
        let half_lambda = C64::new(0.5 * lambda, 0.0);
        for (col, m) in sector.basis().iter().enumerate() {
            for r in 0..d {
                if m[r] == 0 {
                    continue;
                }
                for s in 0..d {
                    let avail = if s == r { m[s].saturating_sub(1) } else { m[s] };
                    if avail == 0 {
                        continue;
                    }
                    let c_ann = Float::sqrt(m[r] as f64) * Float::sqrt(avail as f64);
                    for p in 0..d {
                        for q in 0..d {
                            let w_el = w.tensor_element(p, q, r, s);
                            if w_el == C64::new(0.0, 0.0) {
                                continue;
                            }
                            scratch.copy_from_slice(m);
                            scratch[r] -= 1;
                            scratch[s] -= 1;
                            let cq = Float::sqrt((scratch[q] + 1) as f64);
                            scratch[q] += 1;
                            let cp = Float::sqrt((scratch[p] + 1) as f64);
                            scratch[p] += 1;
                            let row = sector.position(&scratch).unwrap();
                            ham[(row, col)] +=
                                half_lambda * w_el * C64::new(cp * cq * c_ann, 0.0);
                        }
                    }
                }
            }
        }
    }

    let res = linalg::hermitian_residual(&ham);
    if res > TOL.hermitian {
        return Err(Error::NotHermitian { residual: res });
    }
    Ok(linalg::hermitize(&ham))
}

/// Default mean-field coupling `λ = 1/(N-1)`.
pub fn mean_field_lambda(n_particles: u32) -> f64 {
    if n_particles <= 1 {
        0.0
    } else {
        1.0 / (n_particles as f64 - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigh, inner};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e_k(d: usize, k: usize) -> CVector {
        CVector::from_fn(d, |i, _| if i == k { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn sector_dimension_examples() {
        assert_eq!(sector_dimension(2, 3).unwrap(), 4);
        assert_eq!(sector_dimension(5, 0).unwrap(), 1);
        assert_eq!(sector_dimension(7, 0).unwrap(), 1);
        assert_eq!(sector_dimension(3, 2).unwrap(), 6);
    }

    #[test]
    fn sector_dimension_cap_is_enforced() {
        let err = sector_dimension_capped(64, 64, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
        // Astronomically large request must report, not wrap.
        let err = sector_dimension_capped(2000, 4000, usize::MAX).unwrap_err();
        assert!(matches!(err, Error::Capacity { .. }));
    }

    #[test]
    fn index_roundtrip_is_exact() {
        let sector = SymSector::new(4, 5).unwrap();
        for i in 0..sector.dim() {
            let m = sector.occupation(i).to_vec();
            assert_eq!(sector.position(&m), Some(i));
        }
    }

    #[test]
    fn product_embed_basis_vector() {
        let ket = product_embed(&e_k(2, 0), 2).unwrap();
        let amps = ket.amplitudes();
        assert!((amps[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(amps[1].norm() < 1e-14 && amps[2].norm() < 1e-14);

        let ket = product_embed(&e_k(2, 1), 3).unwrap();
        let idx = ket.sector().position(&[0, 3]).unwrap();
        assert!((ket.amplitudes()[idx] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn product_embed_superposition() {
        // u = (e1+e2)/sqrt(2), N = 2 -> amplitudes (1/2, 1/sqrt(2), 1/2).
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let u = CVector::from_vec(alloc::vec![c(s, 0.0), c(s, 0.0)]);
        let ket = product_embed(&u, 2).unwrap();
        let a = ket.amplitudes();
        assert!((a[0] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((a[1] - c(s, 0.0)).norm() < 1e-12);
        assert!((a[2] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn product_embed_rejects_unnormalized() {
        let u = CVector::from_vec(alloc::vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(product_embed(&u, 2), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn product_overlap_power_law() {
        // <u^N, v^N> = <u,v>^N on random pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for n in [1u32, 2, 3, 5] {
            for _ in 0..25 {
                let u = random_sphere_point(3, &mut rng);
                let v = random_sphere_point(3, &mut rng);
                let lhs = inner(
                    product_embed(&u, n).unwrap().amplitudes(),
                    product_embed(&v, n).unwrap().amplitudes(),
                );
                let rhs = inner(&u, &v).powu(n);
                assert!((lhs - rhs).norm() < 1e-10, "n={n} lhs={lhs} rhs={rhs}");
            }
        }
    }

    #[test]
    fn single_mode_ladder_actions() {
        let sector = SymSector::new(2, 2).unwrap();
        let a1 = annihilator_matrix(&e_k(2, 0), &sector).unwrap();
        // a(e1) |(2,0)> = sqrt(2) |(1,0)>
        let src = sector.position(&[2, 0]).unwrap();
        let lower = sector.lowered().unwrap();
        let dst = lower.position(&[1, 0]).unwrap();
        assert!((a1[(dst, src)] - c(2.0f64.sqrt(), 0.0)).norm() < 1e-14);
        // a(e1) |(1,1)> = |(0,1)>
        let src = sector.position(&[1, 1]).unwrap();
        let dst = lower.position(&[0, 1]).unwrap();
        assert!((a1[(dst, src)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn annihilator_on_vacuum_errors() {
        let vac = SymSector::new(2, 0).unwrap();
        assert!(annihilator_matrix(&e_k(2, 0), &vac).is_err());
    }

    #[test]
    fn ccr_on_random_vectors() {
        // [a(f), a*(g)] = <f,g> Id on every sector that fits the cap.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4usize {
            for n in 1..=3u32 {
                let sector = SymSector::new(d, n).unwrap();
                let f = random_sphere_point(d, &mut rng);
                let g = random_sphere_point(d, &mut rng);
                let a_up = annihilator_matrix(&f, &sector.raised().unwrap()).unwrap();
                let c_up = creator_matrix(&g, &sector).unwrap();
                let a_dn = annihilator_matrix(&f, &sector).unwrap();
                let c_dn = creator_matrix(&g, &sector.lowered().unwrap()).unwrap();
                let comm = &a_up * &c_up - &c_dn * &a_dn;
                let expect = linalg::eye(sector.dim()) * inner(&f, &g);
                let res = (&comm - &expect).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(res < 1e-12, "d={d} n={n} res={res:e}");
            }
        }
    }

    #[test]
    fn hamiltonian_diagonal_example() {
        // d=2, h=diag(0,1), w=0, N=3: diagonal entries 3-k for k particles
        // in mode 1; ground energy 0.
        let h = OneBodyOp::diagonal(&[0.0, 1.0]);
        let w = TwoBodyOp::zero(2).unwrap();
        let ham = assemble_hamiltonian(&h, &w, 3, 1.0).unwrap();
        let sector = SymSector::new(2, 3).unwrap();
        for (i, m) in sector.basis().iter().enumerate() {
            let expect = (3 - m[0]) as f64;
            assert!((ham[(i, i)] - c(expect, 0.0)).norm() < 1e-13);
        }
        let (vals, _) = eigh(&ham);
        assert!(vals[0].abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_contact_interaction_example() {
        // d=2, h=diag(0,1), w = 2|e1 e1><e1 e1|, N=3, lambda=1/2:
        // diagonal entries (3-k) + C(k,2); ground energy 2.
        let h = OneBodyOp::diagonal(&[0.0, 1.0]);
        let w = TwoBodyOp::contact(2, 0, 2.0).unwrap();
        let ham = assemble_hamiltonian(&h, &w, 3, 0.5).unwrap();
        let sector = SymSector::new(2, 3).unwrap();
        for (i, m) in sector.basis().iter().enumerate() {
            let k = m[0] as f64;
            let expect = (3.0 - k) + k * (k - 1.0) / 2.0;
            assert!(
                (ham[(i, i)] - c(expect, 0.0)).norm() < 1e-13,
                "m={:?} got={} want={}",
                m,
                ham[(i, i)],
                expect
            );
        }
        let (vals, _) = eigh(&ham);
        assert!((vals[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_single_particle_has_no_interaction() {
        let h = OneBodyOp::random(3, 5);
        let w = TwoBodyOp::random(3, 6).unwrap();
        let ham = assemble_hamiltonian(&h, &w, 1, 123.0).unwrap();
        let res = (&ham - h.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-13);
    }

    #[test]
    fn hamiltonian_unitary_covariance() {
        // Conjugating h and w by a one-body unitary permutes nothing in the
        // spectrum of the assembled Hamiltonian.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = 2;
        let n = 3;
        let h = OneBodyOp::random(d, 21);
        let w = TwoBodyOp::random(d, 22).unwrap();
        // Haar-ish unitary from the QR of a Gaussian matrix.
        let g = random_gaussian_matrix(d, d, &mut rng);
        let qr = g.qr();
        let u = qr.q();
        let hu = OneBodyOp::new(u.adjoint() * h.matrix() * &u).unwrap();
        let u2 = sector_unitary(&u, 2).unwrap();
        let wu = TwoBodyOp::new(d, u2.adjoint() * w.matrix() * &u2).unwrap();

        let ham = assemble_hamiltonian(&h, &w, n, 0.7).unwrap();
        let ham_u = assemble_hamiltonian(&hu, &wu, n, 0.7).unwrap();
        let (v1, _) = eigh(&ham);
        let (v2, _) = eigh(&ham_u);
        for (a, b) in v1.iter().zip(v2.iter()) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn sector_unitary_is_unitary_and_respects_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = 3;
        let n = 3;
        let g = random_gaussian_matrix(d, d, &mut rng);
        let u = g.qr().q();
        let su = sector_unitary(&u, n).unwrap();
        let dim = su.nrows();
        let res = (&su.adjoint() * &su - linalg::eye(dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(res < 1e-12, "unitarity residual {res:e}");

        // Sym^N(U) u^{(x)N} = (U u)^{(x)N}.
        let v = random_sphere_point(d, &mut rng);
        let lhs = &su * product_embed(&v, n).unwrap().amplitudes();
        let uv = &u * &v;
        let rhs = product_embed(&(uv.clone() / c(linalg::norm(&uv), 0.0)), n).unwrap();
        let res = (&lhs - rhs.amplitudes()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-12, "product covariance residual {res:e}");
    }
}
