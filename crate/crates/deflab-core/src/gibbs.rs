//! Quantum Gibbs states at temperature `T = tN`, classical Gibbs measures
//! on the one-body sphere, Berezin-Lieb inequality checks and the
//! free-energy gap sweep.
//!
//! The classical side integrates over the unit sphere of `C^d`. For `d = 2`
//! an exact two-variable quadrature is used: with `u = (sin θ, cos θ e^{iφ})`
//! the normalized uniform measure is `sin(2θ) dθ dφ / 2π` on
//! `[0, π/2] × [0, 2π)` (equivalently, `|u_1|²` is uniform on `[0, 1]`; the
//! test suite validates this parametrization against Monte Carlo instead of
//! assuming it). Gauss-Legendre in `θ` and a phase-exact trapezoid in `φ`
//! give machine-precision integrals for the smooth integrands used here.

use alloc::vec::Vec;

use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hartree::{hartree_energy, HartreeProblem};
use crate::linalg;
use crate::qdefinetti::{coherent_mixture_by_moments, definetti_gap, lower_symbol_value};
use crate::states::DensityOp;
use crate::symspace::{assemble_hamiltonian, random_sphere_point, SymSector};
use crate::tol::TOL;
use crate::{C64, CMatrix, CVector};

/// Quadrature over the unit sphere of `C^2` (normalized uniform measure).
#[derive(Debug, Clone)]
pub struct SphereQuadD2 {
    pub points: Vec<CVector>,
    pub weights: Vec<f64>,
}

impl SphereQuadD2 {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (nodes, glw) = crate::quad::gauss_legendre(n_theta);
        let mut points = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        let half_pi = core::f64::consts::FRAC_PI_2;
        for (x, w) in nodes.iter().zip(glw.iter()) {
            let theta = 0.5 * half_pi * (x + 1.0);
            let wt = 0.5 * half_pi * w * Float::sin(2.0 * theta);
            let (s, c) = (Float::sin(theta), Float::cos(theta));
            for j in 0..n_phi {
                let phi = 2.0 * core::f64::consts::PI * (j as f64 + 0.5) / n_phi as f64;
                let u = CVector::from_vec(alloc::vec![
                    C64::new(s, 0.0),
                    C64::new(c, 0.0) * C64::new(0.0, phi).exp(),
                ]);
                points.push(u);
                weights.push(wt / n_phi as f64);
            }
        }
        SphereQuadD2 { points, weights }
    }

    /// Default resolution used by the sweeps.
    pub fn standard() -> Self {
        SphereQuadD2::new(64, 64)
    }

    /// `∫ f(u) du`.
    pub fn integrate(&self, mut f: impl FnMut(&CVector) -> f64) -> f64 {
        self.points.iter().zip(self.weights.iter()).map(|(u, w)| w * f(u)).sum()
    }
}

/// Gibbs state `exp(-H_N/T)/Z` via eigendecomposition.
pub fn quantum_gibbs(p: &HartreeProblem, n_particles: u32, temperature: f64) -> Result<DensityOp> {
    if temperature <= 0.0 {
        return Err(Error::OutOfRange { what: "temperature", value: temperature });
    }
    let ham = assemble_hamiltonian(&p.h, &p.w, n_particles, crate::symspace::mean_field_lambda(n_particles))?;
    gibbs_of_hamiltonian(&ham, p.modes(), n_particles, temperature)
}

/// Gibbs state of an explicit sector Hamiltonian.
pub fn gibbs_of_hamiltonian(
    ham: &CMatrix,
    d: usize,
    n_particles: u32,
    temperature: f64,
) -> Result<DensityOp> {
    if temperature <= 0.0 {
        return Err(Error::OutOfRange { what: "temperature", value: temperature });
    }
    let (vals, vecs) = linalg::eigh(ham);
    let e0 = vals[0];
    let weights: Vec<f64> = vals.iter().map(|&e| Float::exp(-(e - e0) / temperature)).collect();
    let z: f64 = weights.iter().sum();
    let dim = ham.nrows();
    let mut diag = CMatrix::zeros(dim, dim);
    for (i, w) in weights.iter().enumerate() {
        diag[(i, i)] = C64::new(w / z, 0.0);
    }
    let mat = &vecs * diag * vecs.adjoint();
    DensityOp::new(SymSector::new(d, n_particles)?, mat)
}

/// Quantum free energy `F_N = -T log tr exp(-H_N/T)` with the log-sum-exp
/// shift for stability.
pub fn quantum_free_energy(p: &HartreeProblem, n_particles: u32, temperature: f64) -> Result<f64> {
    if temperature <= 0.0 {
        return Err(Error::OutOfRange { what: "temperature", value: temperature });
    }
    let ham = assemble_hamiltonian(&p.h, &p.w, n_particles, crate::symspace::mean_field_lambda(n_particles))?;
    let (vals, _) = linalg::eigh(&ham);
    let e0 = vals[0];
    let z_shifted: f64 = vals.iter().map(|&e| Float::exp(-(e - e0) / temperature)).sum();
    Ok(e0 - temperature * Float::ln(z_shifted))
}

/// Free-energy functional `tr[H Γ] + T tr[Γ log Γ]` of an arbitrary state.
pub fn free_energy_functional(ham: &CMatrix, gamma: &DensityOp, temperature: f64) -> f64 {
    let energy = linalg::frobenius_inner(&ham.adjoint(), gamma.matrix()).re;
    energy + temperature * linalg::trace_x_log_x(gamma.matrix(), TOL.eig_clamp)
}

/// Monte Carlo options for sphere averages.
#[derive(Debug, Clone, Copy)]
pub struct McOptions {
    pub samples: usize,
    pub seed: u64,
}

/// Classical free energy `F_cl = -t log ∫ exp(-E_H[u]/t) du` with the
/// available evaluation paths.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalFreeEnergy {
    /// Preferred estimate (quadrature when available, else Monte Carlo).
    pub value: f64,
    /// Standard error of `value` (0 for the quadrature path).
    pub stderr: f64,
    pub quadrature: Option<f64>,
    /// `(value, stderr)` of the Monte Carlo path.
    pub monte_carlo: Option<(f64, f64)>,
}

/// Estimate `F_cl`. For `d = 2` an exact quadrature path is always
/// computed; a Monte Carlo path (any `d`) is added when `mc` is given.
/// Fewer than 10³ samples are refused.
pub fn classical_free_energy(
    p: &HartreeProblem,
    t: f64,
    mc: Option<McOptions>,
) -> Result<ClassicalFreeEnergy> {
    if t <= 0.0 {
        return Err(Error::OutOfRange { what: "t", value: t });
    }
    let quadrature = if p.modes() == 2 {
        let quad = SphereQuadD2::standard();
        let avg = quad.integrate(|u| Float::exp(-hartree_energy(u, p).unwrap() / t));
        Some(-t * Float::ln(avg))
    } else {
        None
    };
    let monte_carlo = match mc {
        None => None,
        Some(opts) => {
            if opts.samples < 1000 {
                return Err(Error::Refusal {
                    what: "Monte Carlo sample count below 10^3",
                    diagnostic: opts.samples as f64,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut sum = 0.0f64;
            let mut sumsq = 0.0f64;
            for _ in 0..opts.samples {
                let u = random_sphere_point(p.modes(), &mut rng);
                let x = Float::exp(-hartree_energy(&u, p).unwrap() / t);
                sum += x;
                sumsq += x * x;
            }
            let mean = sum / opts.samples as f64;
            let var = (sumsq / opts.samples as f64 - mean * mean).max(0.0);
            let se_mean = Float::sqrt(var / opts.samples as f64);
            // Delta method for -t log(mean).
            Some((-t * Float::ln(mean), t * se_mean / mean))
        }
    };
    let (value, stderr) = match (quadrature, monte_carlo) {
        (Some(q), _) => (q, 0.0),
        (None, Some(m)) => m,
        (None, None) => {
            return Err(Error::Domain {
                what: "no evaluation path: quadrature needs d = 2, else Monte Carlo options",
            })
        }
    };
    Ok(ClassicalFreeEnergy { value, stderr, quadrature, monte_carlo })
}

/// Classical Gibbs density `μ_cl(u) = exp(-E_H[u]/t) / ∫ exp(-E_H/t) du`
/// evaluated on the `d = 2` quadrature, as `(points, weights, values)`.
fn classical_gibbs_values(
    p: &HartreeProblem,
    t: f64,
    quad: &SphereQuadD2,
) -> (Vec<f64>, f64) {
    let raw: Vec<f64> =
        quad.points.iter().map(|u| Float::exp(-hartree_energy(u, p).unwrap() / t)).collect();
    let z: f64 = raw.iter().zip(quad.weights.iter()).map(|(v, w)| v * w).sum();
    (raw.iter().map(|v| v / z).collect(), z)
}

/// Outcome of a Berezin-Lieb inequality check. `margin` is the inequality
/// slack, non-negative up to numerical error when the inequality holds.
#[derive(Debug, Clone, Copy)]
pub struct BerezinLiebReport {
    /// `tr[Γ log Γ]`.
    pub quantum_entropy_term: f64,
    /// `dim ∫ f(symbol/dim) du`, `f(x) = x log x`.
    pub classical_entropy_term: f64,
    /// First inequality: quantum − classical. Second: classical − quantum.
    pub margin: f64,
}

/// First Berezin-Lieb inequality (`f(x) = x log x`, lower symbol):
/// `tr[Γ log Γ] ≥ dim ∫ (μ/dim) log(μ/dim) du`. Requires `d = 2` for the
/// quadrature path.
pub fn berezin_lieb_first(gamma: &DensityOp, quad: &SphereQuadD2) -> Result<BerezinLiebReport> {
    if gamma.sector().modes() != 2 {
        return Err(Error::Domain { what: "quadrature path requires d = 2" });
    }
    let dim = gamma.sector().dim() as f64;
    let lhs = linalg::trace_x_log_x(gamma.matrix(), TOL.eig_clamp);
    let rhs = quad.integrate(|u| {
        let s = lower_symbol_value(gamma, u).unwrap() / dim;
        if s <= 0.0 {
            0.0
        } else {
            dim * s * Float::ln(s)
        }
    });
    Ok(BerezinLiebReport {
        quantum_entropy_term: lhs,
        classical_entropy_term: rhs,
        margin: lhs - rhs,
    })
}

/// Second Berezin-Lieb inequality on a state built from an explicit
/// non-negative upper symbol: the symbol is the lower symbol `g` of a
/// source state `Θ` on `Sym^M`, and
/// `Γ = ∫ |u^⊗N⟩⟨u^⊗N| g(u) du` is assembled by exact moments. Checks
/// `tr[Γ log Γ] ≤ dim ∫ (g/dim) log(g/dim) du`.
pub fn berezin_lieb_second(
    upper_source: &DensityOp,
    n_particles: u32,
    quad: &SphereQuadD2,
) -> Result<BerezinLiebReport> {
    if upper_source.sector().modes() != 2 {
        return Err(Error::Domain { what: "quadrature path requires d = 2" });
    }
    let mat = coherent_mixture_by_moments(upper_source, n_particles)?;
    let sector = SymSector::new(2, n_particles)?;
    let gamma = DensityOp::new(sector.clone(), mat)?;
    let dim = sector.dim() as f64;
    let lhs = linalg::trace_x_log_x(gamma.matrix(), TOL.eig_clamp);
    let rhs = quad.integrate(|u| {
        let g = lower_symbol_value(upper_source, u).unwrap() / dim;
        if g <= 0.0 {
            0.0
        } else {
            dim * g * Float::ln(g)
        }
    });
    Ok(BerezinLiebReport {
        quantum_entropy_term: lhs,
        classical_entropy_term: rhs,
        margin: rhs - lhs,
    })
}

/// One row of the free-energy gap sweep at `T = tN`.
#[derive(Debug, Clone, Copy)]
pub struct FreeEnergyRow {
    pub n_particles: u32,
    /// `T = tN`.
    pub temperature: f64,
    pub f_quantum: f64,
    /// `(F_N + T log dim)/N`.
    pub shifted: f64,
    pub f_classical: f64,
    pub mc_error: f64,
    /// `|shifted - f_classical|`.
    pub gap: f64,
    /// Certified lower-bound slack for this row: measured de Finetti
    /// corrections `‖h‖ δ₁ + ½‖w‖ δ₂` entering Theorem-style lower bounds.
    pub certified_slack: f64,
}

/// Result of [`gap_sweep`].
#[derive(Debug, Clone)]
pub struct GapSweep {
    pub rows: Vec<FreeEnergyRow>,
    pub f_classical: ClassicalFreeEnergy,
    /// Max `gap` over the larger half of the sweep.
    pub max_gap_top_half: f64,
    /// Max of `gap · N / d` (the fitted constant of `gap ≤ C d/N`).
    pub fit_c: f64,
    /// Rows where `shifted + certified_slack < f_classical - 1e-6`.
    pub lower_bound_violations: usize,
}

/// Free-energy sweep: exact quantum side against the classical limit value.
pub fn gap_sweep(
    p: &HartreeProblem,
    t: f64,
    n_list: &[u32],
    mc: Option<McOptions>,
) -> Result<GapSweep> {
    let f_cl = classical_free_energy(p, t, mc)?;
    let d = p.modes();
    let h_norm = linalg::eigh(p.h.matrix()).0.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let w_norm =
        linalg::eigh(p.w.matrix()).0.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut ns: Vec<u32> = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len());
    for &n in &ns {
        if n < 2 {
            return Err(Error::Domain { what: "gap sweep needs N ≥ 2" });
        }
        let temperature = t * n as f64;
        let f_n = quantum_free_energy(p, n, temperature)?;
        let dim = crate::symspace::sector_dimension(d, n)? as f64;
        let shifted = (f_n + temperature * Float::ln(dim)) / n as f64;
        let gibbs = quantum_gibbs(p, n, temperature)?;
        let delta1 = definetti_gap(&gibbs, 1)?.distance;
        let delta2 = if n >= 2 { definetti_gap(&gibbs, 2)?.distance } else { 0.0 };
        let certified_slack = h_norm * delta1 + 0.5 * w_norm * delta2;
        rows.push(FreeEnergyRow {
            n_particles: n,
            temperature,
            f_quantum: f_n,
            shifted,
            f_classical: f_cl.value,
            mc_error: f_cl.stderr,
            gap: (shifted - f_cl.value).abs(),
            certified_slack,
        });
    }
    let half_start = rows.len() / 2;
    let max_gap_top_half =
        rows[half_start..].iter().map(|r| r.gap).fold(0.0f64, f64::max);
    let fit_c = rows
        .iter()
        .map(|r| r.gap * r.n_particles as f64 / d as f64)
        .fold(0.0f64, f64::max);
    let lower_bound_violations = rows
        .iter()
        .filter(|r| r.shifted + r.certified_slack + 1e-6 < r.f_classical - r.mc_error)
        .count();
    Ok(GapSweep { rows, f_classical: f_cl, max_gap_top_half, fit_c, lower_bound_violations })
}

/// Numerical check of both directions of the mean-field/large-temperature
/// free-energy expansion at a single `N` (`d = 2` quadrature path).
#[derive(Debug, Clone, Copy)]
pub struct DirectionReport {
    pub shifted: f64,
    pub f_classical: f64,
    /// `F_cl - shifted ≥ 0` up to quadrature error (upper-bound direction).
    pub upper_margin: f64,
    /// `shifted - (F_cl[μ_N] - corr) ≥ 0` with the measured de Finetti
    /// correction (lower-bound direction).
    pub lower_margin: f64,
    /// Classical functional at the Gibbs state's lower symbol (≥ `F_cl`).
    pub f_classical_at_lower_symbol: f64,
}

/// Check `shifted ≤ F_cl` and `shifted ≥ F_cl[μ_N] - (‖h‖δ₁ + ½‖w‖δ₂)`.
pub fn theorem_b1_directions(p: &HartreeProblem, n_particles: u32, t: f64) -> Result<DirectionReport> {
    if p.modes() != 2 {
        return Err(Error::Domain { what: "direction check requires d = 2" });
    }
    let quad = SphereQuadD2::standard();
    let temperature = t * n_particles as f64;
    let f_n = quantum_free_energy(p, n_particles, temperature)?;
    let dim = crate::symspace::sector_dimension(2, n_particles)? as f64;
    let shifted = (f_n + temperature * Float::ln(dim)) / n_particles as f64;
    let f_cl = classical_free_energy(p, t, None)?.value;

    let gibbs = quantum_gibbs(p, n_particles, temperature)?;
    // F_cl[μ_N] = ∫ E_H μ_N du + t ∫ μ_N log μ_N du, lower symbol μ_N.
    let energy_term = quad.integrate(|u| {
        hartree_energy(u, p).unwrap() * lower_symbol_value(&gibbs, u).unwrap()
    });
    let entropy_term = quad.integrate(|u| {
        let m = lower_symbol_value(&gibbs, u).unwrap();
        if m <= 0.0 {
            0.0
        } else {
            m * Float::ln(m)
        }
    });
    let f_cl_mu = energy_term + t * entropy_term;

    let h_norm = linalg::eigh(p.h.matrix()).0.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let w_norm =
        linalg::eigh(p.w.matrix()).0.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let delta1 = definetti_gap(&gibbs, 1)?.distance;
    let delta2 = definetti_gap(&gibbs, 2)?.distance;
    let corr = h_norm * delta1 + 0.5 * w_norm * delta2;

    Ok(DirectionReport {
        shifted,
        f_classical: f_cl,
        upper_margin: f_cl - shifted,
        lower_margin: shifted - (f_cl_mu - corr),
        f_classical_at_lower_symbol: f_cl_mu,
    })
}

/// Trace distance between the Gibbs state's 1-RDM and the classical
/// prediction `∫ |u⟩⟨u| μ_cl(u) du` (`d = 2` quadrature path).
pub fn gibbs_rdm_classical_distance(p: &HartreeProblem, n_particles: u32, t: f64) -> Result<f64> {
    if p.modes() != 2 {
        return Err(Error::Domain { what: "classical RDM comparison requires d = 2" });
    }
    let quad = SphereQuadD2::standard();
    let (mu_cl, _z) = classical_gibbs_values(p, t, &quad);
    let mut m_cl = CMatrix::zeros(2, 2);
    for ((u, w), g) in quad.points.iter().zip(quad.weights.iter()).zip(mu_cl.iter()) {
        for i in 0..2 {
            for j in 0..2 {
                m_cl[(i, j)] += u[i] * u[j].conj() * C64::new(w * g, 0.0);
            }
        }
    }
    let gibbs = quantum_gibbs(p, n_particles, t * n_particles as f64)?;
    let rdm = gibbs.partial_trace(1)?;
    Ok(linalg::trace_norm(&(rdm.matrix() - &m_cl)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symspace::{OneBodyOp, TwoBodyOp};

    fn free_problem() -> HartreeProblem {
        HartreeProblem::new(OneBodyOp::zero(2), TwoBodyOp::zero(2).unwrap()).unwrap()
    }

    fn closed_form_problem() -> HartreeProblem {
        HartreeProblem::new(OneBodyOp::diagonal(&[0.0, 1.0]), TwoBodyOp::zero(2).unwrap())
            .unwrap()
    }

    #[test]
    fn sphere_quadrature_normalizes_and_averages_moments() {
        let quad = SphereQuadD2::standard();
        let total = quad.integrate(|_| 1.0);
        assert!((total - 1.0).abs() < 1e-13);
        // ∫ |u_1|^2 du = 1/2, ∫ |u_1|^4 du = 1/3 (uniform |u_1|^2).
        let m2 = quad.integrate(|u| u[0].norm_sqr());
        let m4 = quad.integrate(|u| u[0].norm_sqr().powi(2));
        assert!((m2 - 0.5).abs() < 1e-12);
        assert!((m4 - 1.0 / 3.0).abs() < 1e-12);
        // Relative-phase moment: ∫ u_1 conj(u_2) du = 0.
        let cross = quad.integrate(|u| (u[0] * u[1].conj()).re);
        assert!(cross.abs() < 1e-13);
    }

    #[test]
    fn free_gibbs_state_is_maximally_mixed() {
        let p = free_problem();
        let gamma = quantum_gibbs(&p, 3, 1.0).unwrap();
        let dim = gamma.sector().dim() as f64;
        for i in 0..gamma.sector().dim() {
            assert!((gamma.matrix()[(i, i)].re - 1.0 / dim).abs() < 1e-12);
        }
        // F_N = -T log dim for h = w = 0.
        let f = quantum_free_energy(&p, 3, 0.7).unwrap();
        assert!((f + 0.7 * (4.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian_and_projects_at_low_t() {
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 41),
            TwoBodyOp::random(2, 42).unwrap(),
        )
        .unwrap();
        let n = 3;
        let ham = assemble_hamiltonian(&p.h, &p.w, n, crate::symspace::mean_field_lambda(n))
            .unwrap();
        let gamma = quantum_gibbs(&p, n, 0.9).unwrap();
        let comm = &ham * gamma.matrix() - gamma.matrix() * &ham;
        let res = comm.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(res < 1e-10, "{res:e}");

        // T -> 0: overlap with the ground eigenspace exceeds 1 - 1e-6.
        let cold = quantum_gibbs(&p, n, 1e-6).unwrap();
        let (vals, vecs) = linalg::eigh(&ham);
        let mut proj = CMatrix::zeros(ham.nrows(), ham.ncols());
        for (i, &v) in vals.iter().enumerate() {
            if v - vals[0] < 1e-9 {
                let col = vecs.column(i);
                proj += col * col.adjoint();
            }
        }
        let overlap = linalg::frobenius_inner(&proj, cold.matrix()).re;
        assert!(overlap > 1.0 - 1e-6, "{overlap}");
    }

    #[test]
    fn free_energy_identity_and_monotonicity() {
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 43),
            TwoBodyOp::random(2, 44).unwrap(),
        )
        .unwrap();
        let n = 3;
        let ham = assemble_hamiltonian(&p.h, &p.w, n, crate::symspace::mean_field_lambda(n))
            .unwrap();
        let mut last = f64::INFINITY;
        for &t in &[0.3f64, 0.6, 1.0, 2.0, 5.0] {
            let f = quantum_free_energy(&p, n, t).unwrap();
            let gibbs = quantum_gibbs(&p, n, t).unwrap();
            let via_functional = free_energy_functional(&ham, &gibbs, t);
            assert!((f - via_functional).abs() < 1e-8, "T={t}: {f} vs {via_functional}");
            assert!(f <= last + 1e-12, "free energy increased in T");
            last = f;
        }
        // T -> 0 limit reaches the ground energy.
        let f0 = quantum_free_energy(&p, n, 1e-6).unwrap();
        let e0 = linalg::eigh(&ham).0[0];
        assert!((f0 - e0).abs() < 1e-5);
    }

    #[test]
    fn gibbs_minimizes_free_energy() {
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 45),
            TwoBodyOp::random(2, 46).unwrap(),
        )
        .unwrap();
        let n = 3;
        let t = 0.8;
        let ham = assemble_hamiltonian(&p.h, &p.w, n, crate::symspace::mean_field_lambda(n))
            .unwrap();
        let gibbs = quantum_gibbs(&p, n, t).unwrap();
        let f_min = free_energy_functional(&ham, &gibbs, t);
        let sector = gibbs.sector().clone();
        for seed in 0..50u64 {
            let gamma = DensityOp::random(sector.clone(), 2 + (seed % 3) as usize, seed).unwrap();
            let f = free_energy_functional(&ham, &gamma, t);
            assert!(f >= f_min - 1e-8, "seed={seed}: {f} < {f_min}");
        }
    }

    #[test]
    fn classical_free_energy_trivial_and_closed_form() {
        // h = w = 0: F_cl = 0 exactly.
        let zero = classical_free_energy(&free_problem(), 1.0, None).unwrap();
        assert!(zero.value.abs() < 1e-12);

        // d=2, h=diag(0,1), w=0, t=1: -log(1 - e^{-1}).
        let f = classical_free_energy(&closed_form_problem(), 1.0, None).unwrap();
        let expect = -(1.0 - (-1.0f64).exp()).ln();
        assert!((f.value - expect).abs() < 1e-10, "{} vs {expect}", f.value);
    }

    #[test]
    fn classical_monte_carlo_agrees_with_quadrature() {
        // Validates the |u_1|^2-uniform parametrization against sampling.
        let p = closed_form_problem();
        let f = classical_free_energy(
            &p,
            1.0,
            Some(McOptions { samples: 200_000, seed: 11 }),
        )
        .unwrap();
        let (mc, se) = f.monte_carlo.unwrap();
        let q = f.quadrature.unwrap();
        assert!((mc - q).abs() <= 4.0 * se, "mc={mc} quad={q} se={se}");
    }

    #[test]
    fn classical_free_energy_refuses_thin_sampling() {
        let p = closed_form_problem();
        let err = classical_free_energy(&p, 1.0, Some(McOptions { samples: 10, seed: 0 }));
        assert!(matches!(err, Err(Error::Refusal { .. })));
    }

    #[test]
    fn berezin_lieb_first_equality_and_random_states() {
        let quad = SphereQuadD2::standard();
        // Maximally mixed: equality case, symbol ≡ 1.
        for n in [1u32, 3] {
            let gamma = DensityOp::maximally_mixed(SymSector::new(2, n).unwrap());
            let rep = berezin_lieb_first(&gamma, &quad).unwrap();
            assert!(rep.margin.abs() < 1e-8, "equality case margin {}", rep.margin);
            let dim = gamma.sector().dim() as f64;
            assert!((rep.quantum_entropy_term + dim.ln()).abs() < 1e-10);
        }
        // Pure product: lhs = 0 ≥ rhs.
        let e1 = CVector::from_vec(alloc::vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let gamma = DensityOp::from_ket(&crate::symspace::product_embed(&e1, 2).unwrap());
        let rep = berezin_lieb_first(&gamma, &quad).unwrap();
        assert!(rep.quantum_entropy_term.abs() < 1e-10);
        assert!(rep.margin >= -1e-8);
        // Random and Gibbs states.
        for seed in 0..5u64 {
            let gamma = DensityOp::random(SymSector::new(2, 3).unwrap(), 2, seed).unwrap();
            let rep = berezin_lieb_first(&gamma, &quad).unwrap();
            assert!(rep.margin >= -1e-6, "seed={seed}: {}", rep.margin);
        }
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 47),
            TwoBodyOp::random(2, 48).unwrap(),
        )
        .unwrap();
        let gibbs = quantum_gibbs(&p, 4, 4.0).unwrap();
        let rep = berezin_lieb_first(&gibbs, &quad).unwrap();
        assert!(rep.margin >= -1e-6, "{}", rep.margin);
    }

    #[test]
    fn berezin_lieb_second_on_symbol_built_states() {
        let quad = SphereQuadD2::standard();
        for (m, n) in [(1u32, 2u32), (2, 3), (2, 2)] {
            for seed in 0..3u64 {
                let theta =
                    DensityOp::random(SymSector::new(2, m).unwrap(), 2, 70 + seed).unwrap();
                let rep = berezin_lieb_second(&theta, n, &quad).unwrap();
                assert!(rep.margin >= -1e-6, "M={m} N={n} seed={seed}: {}", rep.margin);
            }
        }
    }

    #[test]
    fn gap_sweep_trivial_instance_is_exact() {
        let sweep = gap_sweep(&free_problem(), 1.0, &[2, 4, 8], None).unwrap();
        for row in &sweep.rows {
            assert!(row.shifted.abs() < 1e-12);
            assert!(row.gap < 1e-12);
        }
        assert_eq!(sweep.lower_bound_violations, 0);
    }

    #[test]
    fn gap_sweep_closed_form_converges_monotonically() {
        let p = closed_form_problem();
        let sweep = gap_sweep(&p, 1.0, &[4, 8, 16, 32, 40], None).unwrap();
        let expect = -(1.0 - (-1.0f64).exp()).ln();
        assert!((sweep.f_classical.value - expect).abs() < 1e-10);
        let mut last_gap = f64::INFINITY;
        for row in &sweep.rows {
            assert!(row.gap <= 0.5 / row.n_particles as f64, "{row:?}");
            assert!(row.gap <= last_gap + 1e-12, "gap not decreasing: {row:?}");
            last_gap = row.gap;
            // Riemann-sum convergence is one-sided here.
            assert!(row.shifted <= expect);
        }
        assert_eq!(sweep.lower_bound_violations, 0);
        // gap * N bounded along the sweep.
        assert!(sweep.fit_c.is_finite() && sweep.fit_c > 0.0);
    }

    #[test]
    fn gap_sweep_random_instance_decreases() {
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 49),
            TwoBodyOp::random(2, 50).unwrap(),
        )
        .unwrap();
        let sweep = gap_sweep(&p, 1.0, &[4, 8, 16, 32], None).unwrap();
        for w in sweep.rows.windows(2) {
            assert!(w[1].gap <= w[0].gap + 1e-9, "{:?} -> {:?}", w[0], w[1]);
        }
        assert_eq!(sweep.lower_bound_violations, 0);
    }

    #[test]
    fn theorem_directions_hold_numerically() {
        let p = closed_form_problem();
        for n in [3u32, 6, 10] {
            let rep = theorem_b1_directions(&p, n, 1.0).unwrap();
            assert!(rep.upper_margin >= -1e-8, "N={n}: {rep:?}");
            assert!(rep.lower_margin >= -1e-8, "N={n}: {rep:?}");
            assert!(rep.f_classical_at_lower_symbol >= rep.f_classical - 1e-8);
        }
        let p = HartreeProblem::new(
            OneBodyOp::random(2, 51),
            TwoBodyOp::random(2, 52).unwrap(),
        )
        .unwrap();
        let rep = theorem_b1_directions(&p, 5, 0.7).unwrap();
        assert!(rep.upper_margin >= -1e-8, "{rep:?}");
        assert!(rep.lower_margin >= -1e-8, "{rep:?}");
    }

    #[test]
    fn rdm_distance_to_classical_decreases() {
        let p = closed_form_problem();
        let mut last = f64::INFINITY;
        for n in [4u32, 8, 16, 32] {
            let dist = gibbs_rdm_classical_distance(&p, n, 1.0).unwrap();
            assert!(dist <= last + 1e-10, "N={n}: {dist} after {last}");
            last = dist;
        }
    }
}
