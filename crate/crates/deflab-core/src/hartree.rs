//! Hartree energy functional on the one-body sphere, its minimization by
//! projected gradient descent, exact N-body ground energies and the
//! mean-field convergence sweep `E(N)/N → e_H`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::states::DensityOp;
use crate::symspace::{
    assemble_hamiltonian, mean_field_lambda, product_embed, random_sphere_point, OneBodyOp,
    SymSector, TwoBodyOp,
};
use crate::tol::TOL;
use crate::{C64, CMatrix, CVector};

/// One-body operator `h` and symmetric two-body operator `w` on `d` modes.
#[derive(Debug, Clone)]
pub struct HartreeProblem {
    pub h: OneBodyOp,
    pub w: TwoBodyOp,
}

impl HartreeProblem {
    pub fn new(h: OneBodyOp, w: TwoBodyOp) -> Result<Self> {
        if h.modes() != w.modes() {
            return Err(Error::ShapeMismatch { expected: "h and w on the same one-body space" });
        }
        Ok(HartreeProblem { h, w })
    }

    pub fn modes(&self) -> usize {
        self.h.modes()
    }

    /// The diagonal benchmark instance `h = diag(0,1)`,
    /// `w = g |e_1⊗e_1⟩⟨e_1⊗e_1|` on two modes.
    pub fn diagonal_fixture(g: f64) -> Self {
        HartreeProblem {
            h: OneBodyOp::diagonal(&[0.0, 1.0]),
            w: TwoBodyOp::contact(2, 0, g).unwrap(),
        }
    }
}

/// Raw symmetric 2-sector coordinates of `u⊗u` (no renormalization):
/// `k_m(u) = sqrt(2/m!) Π u_i^{m_i}`.
fn two_sector_coords(u: &CVector, sector2: &SymSector) -> CVector {
    CVector::from_fn(sector2.dim(), |i, _| {
        let m = sector2.occupation(i);
        let mut z = C64::new(1.0, 0.0);
        let mut fact = 2.0f64; // 2!
        for (k, &mk) in m.iter().enumerate() {
            for j in 0..mk {
                z *= u[k];
                fact /= (j + 1) as f64;
            }
        }
        z * C64::new(Float::sqrt(fact), 0.0)
    })
}

/// Holomorphic derivative `∂k(u)/∂u_i` of the 2-sector coordinates.
fn two_sector_coords_deriv(u: &CVector, sector2: &SymSector, i: usize) -> CVector {
    CVector::from_fn(sector2.dim(), |row, _| {
        let m = sector2.occupation(row);
        if m[i] == 0 {
            return C64::new(0.0, 0.0);
        }
        // d/du_i of sqrt(2/m!) Π u^m = m_i u_i^{m_i-1} * rest.
        let mut fact = 2.0f64;
        let mut z = C64::new(m[i] as f64, 0.0);
        for (k, &mk) in m.iter().enumerate() {
            let power = if k == i { mk - 1 } else { mk };
            for _ in 0..power {
                z *= u[k];
            }
            for j in 0..mk {
                fact /= (j + 1) as f64;
            }
        }
        z * C64::new(Float::sqrt(fact), 0.0)
    })
}

/// Hartree energy `E_H[u] = ⟨u, h u⟩ + ½ ⟨u⊗u, w u⊗u⟩` for normalized `u`,
/// the two-body term evaluated through the symmetric 2-sector embedding.
pub fn hartree_energy(u: &CVector, p: &HartreeProblem) -> Result<f64> {
    let norm = linalg::norm(u);
    if (norm - 1.0).abs() > TOL.unit_norm {
        return Err(Error::NotNormalized { norm });
    }
    Ok(hartree_energy_unchecked(u, p))
}

fn hartree_energy_unchecked(u: &CVector, p: &HartreeProblem) -> f64 {
    let one = (u.adjoint() * p.h.matrix() * u)[(0, 0)].re;
    let k = two_sector_coords(u, p.w.sector());
    let two = (k.adjoint() * p.w.matrix() * &k)[(0, 0)].re;
    one + 0.5 * two
}

/// Riemannian gradient of the Hartree energy on the unit sphere of `C^d`
/// (real gradient of the sphere restriction, `2 P_tan ∂E/∂conj(u)`).
pub fn hartree_gradient(u: &CVector, p: &HartreeProblem) -> CVector {
    let d = p.modes();
    let sector2 = p.w.sector();
    let k = two_sector_coords(u, sector2);
    let wk = p.w.matrix() * &k;
    let mut g = p.h.matrix() * u;
    for i in 0..d {
        let di = two_sector_coords_deriv(u, sector2, i);
        g[i] += 0.5 * linalg::inner(&di, &wk);
    }
    // Tangential projection; <u, g> is real for a phase-invariant energy.
    let radial = g.iter().zip(u.iter()).map(|(gi, ui)| (ui.conj() * gi).re).sum::<f64>();
    let proj = &g - u * C64::new(radial, 0.0);
    proj * C64::new(2.0, 0.0)
}

/// Options for [`hartree_minimize`].
#[derive(Debug, Clone, Copy)]
pub struct MinimizeOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Base seed of the deterministic restart frame.
    pub seed: u64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { restarts: 16, max_iter: 20_000, grad_tol: 1e-9, seed: 0x4a57 }
    }
}

/// Result of the multistart projected-gradient minimization.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub energy: f64,
    pub minimizer: CVector,
    /// Total iterations over all restarts.
    pub iterations: usize,
    /// Riemannian gradient norm at the returned point.
    pub grad_norm: f64,
    /// False when no restart reached `grad_tol`; the best value found is
    /// still returned.
    pub converged: bool,
    /// Stationary points found by the individual restarts (for degeneracy
    /// diagnostics), deduplicated by energy only.
    pub stationary_points: Vec<CVector>,
}

/// Projected-gradient descent on the sphere with Armijo backtracking and a
/// deterministic multistart frame.
pub fn hartree_minimize(p: &HartreeProblem, opts: MinimizeOptions) -> MinimizeResult {
    let d = p.modes();
    let mut best_energy = f64::INFINITY;
    let mut best_u = CVector::zeros(d);
    let mut best_grad = f64::INFINITY;
    let mut iterations = 0usize;
    let mut converged = false;
    let mut stationary: Vec<(f64, CVector)> = Vec::new();

    for restart in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(opts.seed, restart as u64));
        let mut u = random_sphere_point(d, &mut rng);
        let mut energy = hartree_energy_unchecked(&u, p);
        let mut step = 1.0f64;
        let mut grad_norm = f64::INFINITY;
        for _ in 0..opts.max_iter {
            iterations += 1;
            let g = hartree_gradient(&u, p);
            grad_norm = linalg::norm(&g);
            if grad_norm < opts.grad_tol {
                break;
            }
            // Armijo backtracking along the projected gradient.
            let mut eta = step;
            let mut accepted = false;
            for _ in 0..60 {
                let trial = &u - &g * C64::new(eta, 0.0);
                let trial = &trial / C64::new(linalg::norm(&trial), 0.0);
                let trial_energy = hartree_energy_unchecked(&trial, p);
                if trial_energy <= energy - 1e-4 * eta * grad_norm * grad_norm {
                    u = trial;
                    energy = trial_energy;
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if !accepted {
                break;
            }
            step = (eta * 2.0).min(1.0);
        }
        if grad_norm < opts.grad_tol {
            converged = true;
            if !stationary.iter().any(|(e, _)| (e - energy).abs() < 1e-8) {
                stationary.push((energy, u.clone()));
            }
        }
        if energy < best_energy {
            best_energy = energy;
            best_u = u;
            best_grad = grad_norm;
        }
    }
    stationary.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    MinimizeResult {
        energy: best_energy,
        minimizer: best_u,
        iterations,
        grad_norm: best_grad,
        converged,
        stationary_points: stationary.into_iter().map(|(_, u)| u).collect(),
    }
}

/// Exact ground energy: smallest eigenvalue of the assembled Hamiltonian.
pub fn ground_energy(p: &HartreeProblem, n_particles: u32, lambda: f64) -> Result<f64> {
    let ham = assemble_hamiltonian(&p.h, &p.w, n_particles, lambda)?;
    Ok(linalg::min_eigenvalue(&ham))
}

/// Ground state (lowest eigenvector) of the assembled Hamiltonian.
pub fn ground_state(p: &HartreeProblem, n_particles: u32, lambda: f64) -> Result<DensityOp> {
    let ham = assemble_hamiltonian(&p.h, &p.w, n_particles, lambda)?;
    let (_, vecs) = linalg::eigh(&ham);
    let sector = SymSector::new(p.modes(), n_particles)?;
    let ground = vecs.column(0).into_owned();
    let ground = &ground / C64::new(linalg::norm(&ground), 0.0);
    Ok(DensityOp::from_ket(&crate::symspace::Ket::new(sector, ground)?))
}

/// One row of the convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n_particles: u32,
    pub energy: f64,
    pub energy_per_particle: f64,
    pub e_hartree: f64,
    /// `e_H - E(N)/N ≥ 0` by the variational upper bound.
    pub gap: f64,
    /// Trace distance of the ground-state 1-RDM to the convex hull of the
    /// found Hartree minimizers' rank-one projectors.
    pub rdm_distance: f64,
}

/// Result of [`convergence_sweep`].
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub e_hartree: f64,
    /// Least-squares constant of the fit `gap ≈ C/N`.
    pub fit_c: f64,
    /// Root-mean-square residual of the fit.
    pub fit_residual: f64,
    /// Rows violating `E(N)/N ≤ e_H + 1e-10`.
    pub upper_bound_violations: usize,
    /// Adjacent pairs violating monotonicity of `E(N)/N`.
    pub monotonicity_violations: usize,
}

/// Trace distance from `gamma` to the convex hull of the rank-one
/// projectors of `atoms`, by projected subgradient descent over the
/// mixing simplex (deterministic; an upper bound that is tight at the
/// iteration budget used here).
pub fn distance_to_product_hull(gamma: &CMatrix, atoms: &[CVector]) -> f64 {
    if atoms.is_empty() {
        return f64::NAN;
    }
    let projs: Vec<CMatrix> = atoms.iter().map(|u| u * u.adjoint()).collect();
    let k = projs.len();
    let mut lambda = alloc::vec![1.0 / k as f64; k];
    let mut best = f64::INFINITY;
    let eval = |lam: &[f64]| -> (f64, Vec<f64>) {
        let mut mix = CMatrix::zeros(gamma.nrows(), gamma.ncols());
        for (l, p) in lam.iter().zip(projs.iter()) {
            mix += p * C64::new(*l, 0.0);
        }
        let diff = gamma - &mix;
        let (vals, vecs) = linalg::eigh(&diff);
        let dist: f64 = vals.iter().map(|v| v.abs()).sum();
        // Subgradient of ||gamma - mix||_1 in lambda_i: -tr[sign(diff) P_i].
        let mut sign = CMatrix::zeros(gamma.nrows(), gamma.ncols());
        for (i, &v) in vals.iter().enumerate() {
            let col = vecs.column(i);
            sign += (col * col.adjoint()) * C64::new(if v >= 0.0 { 1.0 } else { -1.0 }, 0.0);
        }
        let grad: Vec<f64> =
            projs.iter().map(|p| -linalg::frobenius_inner(&sign, p).re).collect();
        (dist, grad)
    };
    for it in 0..300 {
        let (dist, grad) = eval(&lambda);
        best = best.min(dist);
        let step = 0.5 / (1.0 + it as f64);
        for (l, g) in lambda.iter_mut().zip(grad.iter()) {
            *l -= step * g;
        }
        project_simplex(&mut lambda);
    }
    // Vertices are admissible mixtures too.
    for p in projs.iter() {
        best = best.min(linalg::trace_norm(&(gamma - p)));
    }
    best
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(x: &mut [f64]) {
    let n = x.len();
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    let mut found = false;
    for (i, &v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - 1.0) / (i as f64 + 1.0);
        if v - t > 0.0 {
            theta = t;
        } else {
            found = true;
            break;
        }
    }
    let _ = found;
    let _ = n;
    for v in x.iter_mut() {
        *v = (*v - theta).max(0.0);
    }
}

/// Sweep `E(N)/N` against `e_H` over a list of particle numbers, with the
/// mean-field coupling `λ = 1/(N-1)` and a `gap ≈ C/N` fit.
pub fn convergence_sweep(p: &HartreeProblem, n_list: &[u32]) -> Result<SweepResult> {
    let minimum = hartree_minimize(p, MinimizeOptions::default());
    let e_h = minimum.energy;
    let atoms: Vec<CVector> = if minimum.stationary_points.is_empty() {
        alloc::vec![minimum.minimizer.clone()]
    } else {
        minimum.stationary_points.clone()
    };
    let mut ns: Vec<u32> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        if n < 1 {
            return Err(Error::Domain { what: "sweep needs N ≥ 1" });
        }
        let lambda = mean_field_lambda(n);
        let energy = ground_energy(p, n, lambda)?;
        let per = energy / n as f64;
        let gamma1 = ground_state(p, n, lambda)?.partial_trace(1)?;
        let rdm_distance = distance_to_product_hull(gamma1.matrix(), &atoms);
        rows.push(SweepRow {
            n_particles: n,
            energy,
            energy_per_particle: per,
            e_hartree: e_h,
            gap: e_h - per,
            rdm_distance,
        });
    }
    let upper_bound_violations = rows.iter().filter(|r| r.gap < -1e-10).count();
    let monotonicity_violations = rows
        .windows(2)
        .filter(|w| w[1].energy_per_particle < w[0].energy_per_particle - 1e-10)
        .count();
    // Least squares for gap ~ C/N.
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for r in &rows {
        let x = 1.0 / r.n_particles as f64;
        num += r.gap * x;
        den += x * x;
    }
    let fit_c = if den > 0.0 { num / den } else { 0.0 };
    let fit_residual = Float::sqrt(
        rows.iter()
            .map(|r| {
                let e = r.gap - fit_c / r.n_particles as f64;
                e * e
            })
            .sum::<f64>()
            / rows.len().max(1) as f64,
    );
    Ok(SweepResult {
        rows,
        e_hartree: e_h,
        fit_c,
        fit_residual,
        upper_bound_violations,
        monotonicity_violations,
    })
}

/// `⟨u^{⊗N}, H_N u^{⊗N}⟩ / N` for cross-checks: equals the Hartree energy
/// when `λ = 1/(N-1)`.
pub fn product_state_energy_per_particle(
    p: &HartreeProblem,
    u: &CVector,
    n_particles: u32,
    lambda: f64,
) -> Result<f64> {
    let ham = assemble_hamiltonian(&p.h, &p.w, n_particles, lambda)?;
    let ket = product_embed(u, n_particles)?;
    Ok((ket.amplitudes().adjoint() * ham * ket.amplitudes())[(0, 0)].re / n_particles as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn energy_reduces_to_quadratic_form_without_interaction() {
        let p = HartreeProblem::new(OneBodyOp::diagonal(&[0.3, 1.7]), TwoBodyOp::zero(2).unwrap())
            .unwrap();
        let u = CVector::from_vec(alloc::vec![c(0.6, 0.0), c(0.8, 0.0)]);
        let e = hartree_energy(&u, &p).unwrap();
        assert!((e - (0.36 * 0.3 + 0.64 * 1.7)).abs() < 1e-12);
    }

    #[test]
    fn energy_diagonal_fixture_profile() {
        // E_H = (1-s) + s^2 along |u_1|^2 = s; value 3/4 at s = 1/2.
        let p = HartreeProblem::diagonal_fixture(2.0);
        for s in [0.0f64, 0.25, 0.5, 0.9] {
            let u = CVector::from_vec(alloc::vec![c(s.sqrt(), 0.0), c((1.0 - s).sqrt(), 0.0)]);
            let e = hartree_energy(&u, &p).unwrap();
            assert!((e - ((1.0 - s) + s * s)).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn energy_is_phase_invariant() {
        let p = HartreeProblem::new(OneBodyOp::random(3, 1), TwoBodyOp::random(3, 2).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let u = random_sphere_point(3, &mut rng);
        let phase = C64::new(0.0, 0.77).exp();
        let e1 = hartree_energy(&u, &p).unwrap();
        let e2 = hartree_energy(&(&u * phase), &p).unwrap();
        assert!((e1 - e2).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..100u64 {
            let d = 2 + (trial as usize % 2);
            let p = HartreeProblem::new(
                OneBodyOp::random(d, 100 + trial),
                TwoBodyOp::random(d, 200 + trial).unwrap(),
            )
            .unwrap();
            let u = random_sphere_point(d, &mut rng);
            let g = hartree_gradient(&u, &p);
            // Random tangent direction.
            let mut t = random_sphere_point(d, &mut rng);
            let radial: f64 =
                t.iter().zip(u.iter()).map(|(ti, ui)| (ui.conj() * ti).re).sum();
            t -= &u * c(radial, 0.0);
            let tn = linalg::norm(&t);
            if tn < 1e-8 {
                continue;
            }
            t /= c(tn, 0.0);
            let eps = 1e-5;
            let eval = |s: f64| {
                let v = &u + &t * c(s, 0.0);
                let v = &v / c(linalg::norm(&v), 0.0);
                hartree_energy_unchecked(&v, &p)
            };
            let fd = (eval(eps) - eval(-eps)) / (2.0 * eps);
            let an: f64 = g.iter().zip(t.iter()).map(|(gi, ti)| (gi.conj() * ti).re).sum();
            let scale = fd.abs().max(an.abs()).max(1e-6);
            assert!(
                (fd - an).abs() / scale < 1e-6,
                "trial={trial}: fd={fd} analytic={an}"
            );
        }
    }

    #[test]
    fn minimize_without_interaction_finds_lowest_eigenvalue() {
        let p = HartreeProblem::new(OneBodyOp::diagonal(&[0.0, 1.0]), TwoBodyOp::zero(2).unwrap())
            .unwrap();
        let res = hartree_minimize(&p, MinimizeOptions::default());
        assert!(res.converged);
        assert!(res.energy.abs() < 1e-10);
        assert!((res.minimizer[0].norm() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn minimize_diagonal_fixture() {
        let p = HartreeProblem::diagonal_fixture(2.0);
        let res = hartree_minimize(&p, MinimizeOptions::default());
        assert!(res.converged);
        assert!((res.energy - 0.75).abs() < 1e-8, "e = {}", res.energy);
        assert!((res.minimizer[0].norm_sqr() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn minimize_beats_random_probes() {
        let p = HartreeProblem::new(OneBodyOp::random(2, 51), TwoBodyOp::random(2, 52).unwrap())
            .unwrap();
        let res = hartree_minimize(&p, MinimizeOptions::default());
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..10_000 {
            let u = random_sphere_point(2, &mut rng);
            let e = hartree_energy_unchecked(&u, &p);
            assert!(res.energy <= e + 1e-9, "probe beat minimizer: {e} < {}", res.energy);
        }
    }

    #[test]
    fn ground_energy_examples() {
        // w = 0: E(N) = N λ_min(h).
        let p = HartreeProblem::new(OneBodyOp::diagonal(&[0.25, 1.0]), TwoBodyOp::zero(2).unwrap())
            .unwrap();
        let e = ground_energy(&p, 4, mean_field_lambda(4)).unwrap();
        assert!((e - 1.0).abs() < 1e-12);

        // Diagonal fixture, N = 3, λ = 1/2: E = 2.
        let p = HartreeProblem::diagonal_fixture(2.0);
        let e = ground_energy(&p, 3, 0.5).unwrap();
        assert!((e - 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_energy_matches_hartree_at_mean_field_coupling() {
        let p = HartreeProblem::new(OneBodyOp::random(2, 61), TwoBodyOp::random(2, 62).unwrap())
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2u32, 3, 5] {
            let u = random_sphere_point(2, &mut rng);
            let per = product_state_energy_per_particle(&p, &u, n, mean_field_lambda(n)).unwrap();
            let eh = hartree_energy(&u, &p).unwrap();
            assert!((per - eh).abs() < 1e-10, "N={n}: {per} vs {eh}");
        }
    }

    #[test]
    fn sweep_without_interaction_has_zero_gaps() {
        let p = HartreeProblem::new(OneBodyOp::diagonal(&[0.5, 2.0]), TwoBodyOp::zero(2).unwrap())
            .unwrap();
        let sweep = convergence_sweep(&p, &[2, 3, 4, 5]).unwrap();
        for row in &sweep.rows {
            assert!(row.gap.abs() < 1e-8, "{row:?}");
        }
        assert_eq!(sweep.upper_bound_violations, 0);
        assert_eq!(sweep.monotonicity_violations, 0);
    }

    #[test]
    fn sweep_diagonal_fixture_monotone_and_bounded() {
        let p = HartreeProblem::diagonal_fixture(2.0);
        let ns: Vec<u32> = (2..=12).collect();
        let sweep = convergence_sweep(&p, &ns).unwrap();
        assert_eq!(sweep.upper_bound_violations, 0);
        assert_eq!(sweep.monotonicity_violations, 0);
        assert!((sweep.e_hartree - 0.75).abs() < 1e-8);
        // gap decreasing and gap*N bounded.
        for w in sweep.rows.windows(2) {
            assert!(w[1].gap <= w[0].gap + 1e-12);
        }
        let products: Vec<f64> =
            sweep.rows.iter().map(|r| r.gap * r.n_particles as f64).collect();
        let max = products.iter().cloned().fold(f64::MIN, f64::max);
        let min = products.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min < 3.0, "gap*N spread too wide: {min}..{max}");
    }

    #[test]
    fn sweep_random_instance_monotone() {
        let p = HartreeProblem::new(OneBodyOp::random(2, 71), TwoBodyOp::random(2, 72).unwrap())
            .unwrap();
        let ns: Vec<u32> = (2..=10).collect();
        let sweep = convergence_sweep(&p, &ns).unwrap();
        assert_eq!(sweep.upper_bound_violations, 0, "{:#?}", sweep.rows);
        assert_eq!(sweep.monotonicity_violations, 0, "{:#?}", sweep.rows);
    }

    #[test]
    fn rdm_distance_decreases_for_diagonal_fixture() {
        let p = HartreeProblem::diagonal_fixture(2.0);
        let sweep = convergence_sweep(&p, &[2, 4, 6, 8, 10, 12]).unwrap();
        for w in sweep.rows.windows(2) {
            assert!(
                w[1].rdm_distance <= w[0].rdm_distance + 1e-9,
                "{} -> {}",
                w[0].rdm_distance,
                w[1].rdm_distance
            );
        }
    }

    #[test]
    fn simplex_projection_is_a_projection() {
        let mut x = alloc::vec![0.9, 0.4, -0.2];
        project_simplex(&mut x);
        let sum: f64 = x.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(x.iter().all(|&v| v >= 0.0));
    }
}
