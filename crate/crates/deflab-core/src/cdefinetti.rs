//! Classical permutation-symmetric probability tables on a finite alphabet,
//! the Diaconis-Freedman construction and its closed-form marginal
//! identities.
//!
//! A table on `{0..K-1}^N` is stored densely (row-major, first variable most
//! significant). Exact permutation symmetry is guaranteed by construction:
//! symmetric measures are always built from weights on empirical type
//! classes, each configuration receiving `weight / class size`.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combin::{ln_factorial, ln_multi_factorial, multiset_indices};
use crate::error::{Error, Result};

/// Hard cap on dense table sizes.
pub const TABLE_CAP: usize = 10_000_000;

/// Permutation-symmetric probability table over `{0..K-1}^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMeasure {
    alphabet: usize,
    n_vars: u32,
    probs: Vec<f64>,
}

/// Discrete de Finetti mixing measure: one atom per empirical type.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMixing {
    n_vars: u32,
    /// `(weight, type counts)`; the empirical vector is `counts / N`.
    pub atoms: Vec<(f64, Vec<u32>)>,
}

impl EmpiricalMixing {
    /// Empirical probability vector of atom `i` (entries are multiples of
    /// `1/N`).
    pub fn atom_vector(&self, i: usize) -> Vec<f64> {
        let (_, counts) = &self.atoms[i];
        counts.iter().map(|&c| c as f64 / self.n_vars as f64).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|(w, _)| *w).sum()
    }
}

fn table_len(alphabet: usize, n_vars: u32) -> Result<usize> {
    let mut acc: usize = 1;
    for _ in 0..n_vars {
        acc = acc.checked_mul(alphabet).ok_or(Error::Capacity {
            what: "symmetric table",
            required: u128::MAX,
            cap: TABLE_CAP as u128,
        })?;
        if acc > TABLE_CAP {
            return Err(Error::Capacity {
                what: "symmetric table",
                required: acc as u128,
                cap: TABLE_CAP as u128,
            });
        }
    }
    Ok(acc)
}

fn decode(mut x: usize, alphabet: usize, n_vars: u32, out: &mut [usize]) {
    for k in (0..n_vars as usize).rev() {
        out[k] = x % alphabet;
        x /= alphabet;
    }
}

impl SymMeasure {
    /// Build from total masses on empirical type classes (normalized here);
    /// each configuration of a class receives an identical share, so the
    /// result is exactly permutation-invariant.
    pub fn from_type_weights(alphabet: usize, n_vars: u32, weights: &[f64]) -> Result<Self> {
        let types = multiset_indices(alphabet, n_vars);
        if weights.len() != types.len() {
            return Err(Error::ShapeMismatch { expected: "one weight per type class" });
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::Domain { what: "type weights must be non-negative" });
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Domain { what: "type weights must have positive sum" });
        }
        let len = table_len(alphabet, n_vars)?;
        // Per-configuration value: weight / (N! / Π type_i!), precomputed
        // per class and assigned by lookup so equal entries are bit-equal.
        let ln_n = ln_factorial(n_vars as usize);
        let mut per_config: Vec<f64> = Vec::with_capacity(types.len());
        for (t, w) in types.iter().zip(weights.iter()) {
            let class_size = Float::exp(ln_n - ln_multi_factorial(t));
            per_config.push(w / total / libm_round(class_size));
        }
        let type_index: alloc::collections::BTreeMap<Vec<u32>, usize> =
            types.iter().cloned().zip(0..).collect();
        let mut probs = alloc::vec![0.0f64; len];
        let mut digits = alloc::vec![0usize; n_vars as usize];
        let mut counts = alloc::vec![0u32; alphabet];
        for (x, p) in probs.iter_mut().enumerate() {
            decode(x, alphabet, n_vars, &mut digits);
            counts.iter_mut().for_each(|c| *c = 0);
            for &d in digits.iter() {
                counts[d] += 1;
            }
            *p = per_config[type_index[&counts]];
        }
        Ok(SymMeasure { alphabet, n_vars, probs })
    }

    /// Validate a raw table: non-negative entries, unit sum, and exact
    /// permutation symmetry spot-checked on 20 random transpositions.
    pub fn from_probs(alphabet: usize, n_vars: u32, probs: Vec<f64>) -> Result<Self> {
        let len = table_len(alphabet, n_vars)?;
        if probs.len() != len {
            return Err(Error::ShapeMismatch { expected: "K^N table entries" });
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Domain { what: "table entries must be non-negative" });
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::TraceNotOne { trace: sum });
        }
        let m = SymMeasure { alphabet, n_vars, probs };
        if n_vars >= 2 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x7ab1e);
            let mut digits = alloc::vec![0usize; n_vars as usize];
            for _ in 0..20 {
                let i = rng.random_range(0..n_vars as usize);
                let mut j = rng.random_range(0..n_vars as usize);
                if j == i {
                    j = (j + 1) % n_vars as usize;
                }
                let x = rng.random_range(0..m.probs.len());
                decode(x, alphabet, n_vars, &mut digits);
                digits.swap(i, j);
                let y = m.encode(&digits);
                if m.probs[x] != m.probs[y] {
                    return Err(Error::Domain { what: "table is not permutation-symmetric" });
                }
            }
        }
        Ok(m)
    }

    /// Product measure `ρ^{⊗N}`.
    pub fn product(rho: &[f64], n_vars: u32) -> Result<Self> {
        let alphabet = rho.len();
        let sum: f64 = rho.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || rho.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Domain { what: "rho must be a probability vector" });
        }
        let len = table_len(alphabet, n_vars)?;
        let mut probs = alloc::vec![1.0f64; 1];
        for _ in 0..n_vars {
            let mut next = Vec::with_capacity(probs.len() * alphabet);
            for &p in probs.iter() {
                for &r in rho.iter() {
                    next.push(p * r);
                }
            }
            probs = next;
        }
        debug_assert_eq!(probs.len(), len);
        Ok(SymMeasure { alphabet, n_vars, probs })
    }

    /// Point mass at the constant configuration `(a, a, ..., a)`.
    pub fn point_mass(alphabet: usize, n_vars: u32, a: usize) -> Result<Self> {
        let len = table_len(alphabet, n_vars)?;
        if a >= alphabet {
            return Err(Error::Domain { what: "letter out of alphabet" });
        }
        let mut probs = alloc::vec![0.0f64; len];
        let mut idx = 0usize;
        for _ in 0..n_vars {
            idx = idx * alphabet + a;
        }
        probs[idx] = 1.0;
        Ok(SymMeasure { alphabet, n_vars, probs })
    }

    /// Random symmetric table: iid Exp(1) weights on type classes,
    /// normalized (flat-Dirichlet-like), reproducible per seed.
    pub fn random(alphabet: usize, n_vars: u32, seed: u64) -> Result<Self> {
        let types = multiset_indices(alphabet, n_vars);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..types.len())
            .map(|_| -Float::ln(1.0 - rng.random::<f64>()))
            .collect();
        SymMeasure::from_type_weights(alphabet, n_vars, &weights)
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn vars(&self) -> u32 {
        self.n_vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Table index of a configuration.
    pub fn encode(&self, digits: &[usize]) -> usize {
        let mut x = 0usize;
        for &d in digits {
            x = x * self.alphabet + d;
        }
        x
    }

    /// Probability of a configuration.
    pub fn prob(&self, digits: &[usize]) -> f64 {
        self.probs[self.encode(digits)]
    }

    /// Marginal on the first `n` variables (sums out the rest).
    pub fn marginal(&self, n: u32) -> Result<SymMeasure> {
        if n > self.n_vars {
            return Err(Error::Domain { what: "marginal order exceeds variable count" });
        }
        let keep = self.alphabet.pow(n);
        let rest = self.alphabet.pow(self.n_vars - n);
        let mut probs = alloc::vec![0.0f64; keep];
        for (head, slot) in probs.iter_mut().enumerate() {
            let base = head * rest;
            let mut acc = 0.0;
            for t in 0..rest {
                acc += self.probs[base + t];
            }
            *slot = acc;
        }
        Ok(SymMeasure { alphabet: self.alphabet, n_vars: n, probs })
    }

    /// The Diaconis-Freedman mixing measure: total mass per empirical type.
    pub fn df_mixing(&self) -> EmpiricalMixing {
        let types = multiset_indices(self.alphabet, self.n_vars);
        let type_index: alloc::collections::BTreeMap<Vec<u32>, usize> =
            types.iter().cloned().zip(0..).collect();
        let mut weights = alloc::vec![0.0f64; types.len()];
        let mut digits = alloc::vec![0usize; self.n_vars as usize];
        let mut counts = alloc::vec![0u32; self.alphabet];
        for (x, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            decode(x, self.alphabet, self.n_vars, &mut digits);
            counts.iter_mut().for_each(|c| *c = 0);
            for &d in digits.iter() {
                counts[d] += 1;
            }
            weights[type_index[&counts]] += p;
        }
        let atoms = weights
            .into_iter()
            .zip(types)
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, t)| (w, t))
            .collect();
        EmpiricalMixing { n_vars: self.n_vars, atoms }
    }

    /// The Diaconis-Freedman state `μ̃ = Σ_atoms weight · ρ̄^{⊗N}`.
    pub fn df_state(&self) -> SymMeasure {
        let mixing = self.df_mixing();
        self.mixture_table(&mixing, self.n_vars)
    }

    /// `Σ_atoms weight · ρ̄^{⊗n}` for arbitrary order `n` (used for the
    /// marginals of the Diaconis-Freedman state without forming the full
    /// table first).
    pub fn mixture_table(&self, mixing: &EmpiricalMixing, n: u32) -> SymMeasure {
        let len = self.alphabet.pow(n);
        let mut probs = alloc::vec![0.0f64; len];
        for (i, (w, _)) in mixing.atoms.iter().enumerate() {
            let rho = mixing.atom_vector(i);
            let mut partial = alloc::vec![1.0f64; 1];
            for _ in 0..n {
                let mut next = Vec::with_capacity(partial.len() * self.alphabet);
                for &p in partial.iter() {
                    for &r in rho.iter() {
                        next.push(p * r);
                    }
                }
                partial = next;
            }
            for (slot, &p) in probs.iter_mut().zip(partial.iter()) {
                *slot += w * p;
            }
        }
        SymMeasure { alphabet: self.alphabet, n_vars: n, probs }
    }
}

fn libm_round(x: f64) -> f64 {
    Float::round(x)
}

/// Total variation distance `Σ |a - b|` (bound constant convention 2).
pub fn tv_distance(a: &SymMeasure, b: &SymMeasure) -> Result<f64> {
    if a.alphabet != b.alphabet || a.n_vars != b.n_vars {
        return Err(Error::ShapeMismatch { expected: "tables of equal (K, N)" });
    }
    Ok(a.probs.iter().zip(b.probs.iter()).map(|(x, y)| (x - y).abs()).sum())
}

/// Report of the closed-form marginal identities of the Diaconis-Freedman
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DfIdentityReport {
    /// `max |μ̃^(1) - μ^(1)|`.
    pub first_marginal_residual: f64,
    /// `max |μ̃^(2) - ((N-1)/N μ^(2) + diag(μ^(1))/N)|`.
    pub second_marginal_residual: f64,
    /// Per order `n = 1..N`: min entry of `μ̃^(n) - (N!/(N-n)!/N^n) μ^(n)`
    /// (positivity of the remainder measure).
    pub remainder_min_slack: Vec<f64>,
    /// All three identities within their tolerances.
    pub pass: bool,
}

/// Verify the exact marginal identities of the construction.
pub fn df_marginal_identities(mu: &SymMeasure) -> Result<DfIdentityReport> {
    let n_vars = mu.vars();
    if n_vars < 2 {
        return Err(Error::Domain { what: "identities need at least two variables" });
    }
    let k = mu.alphabet();
    let mixing = mu.df_mixing();

    // First marginal: coincides exactly.
    let m1 = mu.marginal(1)?;
    let t1 = mu.mixture_table(&mixing, 1);
    let first = m1
        .probs()
        .iter()
        .zip(t1.probs().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    // Second marginal: μ̃^(2) = (N-1)/N μ^(2) + diag(μ^(1))/N.
    let m2 = mu.marginal(2)?;
    let t2 = mu.mixture_table(&mixing, 2);
    let nf = n_vars as f64;
    let mut second: f64 = 0.0;
    for x1 in 0..k {
        for x2 in 0..k {
            let idx = x1 * k + x2;
            let expect = (nf - 1.0) / nf * m2.probs()[idx]
                + if x1 == x2 { m1.probs()[x1] / nf } else { 0.0 };
            second = second.max((t2.probs()[idx] - expect).abs());
        }
    }

    // Remainder positivity for every order.
    let mut slacks = Vec::with_capacity(n_vars as usize);
    for n in 1..=n_vars {
        let factor = crate::combin::falling_f64(n_vars as usize, n as usize)
            / Float::powi(nf, n as i32);
        let mn = mu.marginal(n)?;
        let tn = mu.mixture_table(&mixing, n);
        let slack = tn
            .probs()
            .iter()
            .zip(mn.probs().iter())
            .map(|(t, m)| t - factor * m)
            .fold(f64::INFINITY, f64::min);
        slacks.push(slack);
    }

    let pass = first < 1e-12
        && second < 1e-12
        && slacks.iter().all(|&s| s > -1e-12);
    Ok(DfIdentityReport {
        first_marginal_residual: first,
        second_marginal_residual: second,
        remainder_min_slack: slacks,
        pass,
    })
}

/// Theorem-level total-variation bound `2 n(n-1)/N`.
pub fn df_tv_bound(n_vars: u32, n: u32) -> f64 {
    2.0 * (n as f64) * (n as f64 - 1.0) / n_vars as f64
}

/// Refined bound `(2/N) min(K n, n²)` for finite alphabets.
pub fn df_tv_bound_refined(alphabet: usize, n_vars: u32, n: u32) -> f64 {
    let nf = n as f64;
    2.0 / (n_vars as f64) * Float::min(alphabet as f64 * nf, nf * nf)
}

/// Paired distances of a table's marginals to the marginals of its
/// Diaconis-Freedman state, with both bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DfGapRow {
    pub order: u32,
    pub tv: f64,
    pub bound: f64,
    pub refined_bound: f64,
}

/// TV distances `tv(μ^(n), μ̃^(n))` for all `n ≤ N`.
pub fn df_gap_rows(mu: &SymMeasure) -> Result<Vec<DfGapRow>> {
    let mixing = mu.df_mixing();
    let mut rows = Vec::new();
    for n in 1..=mu.vars() {
        let a = mu.marginal(n)?;
        let b = mu.mixture_table(&mixing, n);
        let tv = tv_distance(&a, &b)?;
        rows.push(DfGapRow {
            order: n,
            tv,
            bound: df_tv_bound(mu.vars(), n),
            refined_bound: df_tv_bound_refined(mu.alphabet(), mu.vars(), n),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// K=2, N=2 with μ(0,1) = μ(1,0) = 1/2.
    fn anticorrelated() -> SymMeasure {
        SymMeasure::from_type_weights(2, 2, &[0.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn anticorrelated_table_layout() {
        let mu = anticorrelated();
        assert_eq!(mu.prob(&[0, 1]), 0.5);
        assert_eq!(mu.prob(&[1, 0]), 0.5);
        assert_eq!(mu.prob(&[0, 0]), 0.0);
        assert_eq!(mu.prob(&[1, 1]), 0.0);
    }

    #[test]
    fn marginal_of_product_is_product() {
        let rho = [0.2, 0.5, 0.3];
        let mu = SymMeasure::product(&rho, 4).unwrap();
        let m2 = mu.marginal(2).unwrap();
        let expect = SymMeasure::product(&rho, 2).unwrap();
        for (a, b) in m2.probs().iter().zip(expect.probs().iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn marginal_of_anticorrelated_is_uniform() {
        let mu = anticorrelated();
        let m1 = mu.marginal(1).unwrap();
        assert_eq!(m1.probs(), &[0.5, 0.5]);
    }

    #[test]
    fn marginal_consistency_chain() {
        for seed in 0..5u64 {
            let mu = SymMeasure::random(3, 5, seed).unwrap();
            for n in 1..=5u32 {
                let direct = mu.marginal(n).unwrap();
                for m in 1..=n {
                    let two = direct.marginal(m).unwrap();
                    let one = mu.marginal(m).unwrap();
                    for (a, b) in two.probs().iter().zip(one.probs().iter()) {
                        assert!((a - b).abs() < 1e-14);
                    }
                }
            }
        }
        let mu = SymMeasure::random(2, 3, 0).unwrap();
        assert!(mu.marginal(4).is_err());
    }

    #[test]
    fn mixing_of_anticorrelated_is_single_atom() {
        let mixing = anticorrelated().df_mixing();
        assert_eq!(mixing.atoms.len(), 1);
        assert!((mixing.atoms[0].0 - 1.0).abs() < 1e-15);
        assert_eq!(mixing.atoms[0].1, alloc::vec![1, 1]);
        assert_eq!(mixing.atom_vector(0), alloc::vec![0.5, 0.5]);
    }

    #[test]
    fn mixing_of_point_mass_is_single_atom() {
        let mu = SymMeasure::point_mass(3, 4, 0).unwrap();
        let mixing = mu.df_mixing();
        assert_eq!(mixing.atoms.len(), 1);
        assert_eq!(mixing.atoms[0].1, alloc::vec![4, 0, 0]);
    }

    #[test]
    fn atom_count_bounded_by_type_count() {
        for seed in 0..5u64 {
            let mu = SymMeasure::random(3, 4, seed).unwrap();
            let mixing = mu.df_mixing();
            let max_atoms = crate::combin::binomial(4 + 3 - 1, 3 - 1).unwrap();
            assert!(mixing.atoms.len() <= max_atoms);
            assert!((mixing.total_weight() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn df_state_of_anticorrelated_is_uniform() {
        let tilde = anticorrelated().df_state();
        for &p in tilde.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn df_state_does_not_fix_product_measures() {
        // μ = ρ^{⊗2}, ρ = (1/2, 1/2): μ̃(0,0) = 3/8, μ̃(0,1) = 1/8.
        let mu = SymMeasure::product(&[0.5, 0.5], 2).unwrap();
        let tilde = mu.df_state();
        assert!((tilde.prob(&[0, 0]) - 0.375).abs() < 1e-15);
        assert!((tilde.prob(&[0, 1]) - 0.125).abs() < 1e-15);
        assert!((tilde.prob(&[1, 0]) - 0.125).abs() < 1e-15);
        assert!((tilde.prob(&[1, 1]) - 0.375).abs() < 1e-15);
    }

    #[test]
    fn df_state_fixes_point_masses() {
        let mu = SymMeasure::point_mass(2, 3, 0).unwrap();
        let tilde = mu.df_state();
        for (a, b) in mu.probs().iter().zip(tilde.probs().iter()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_identities_on_anticorrelated() {
        let report = df_marginal_identities(&anticorrelated()).unwrap();
        assert!(report.pass, "{report:?}");
        // Factor at N=2, n=2 is 1/2; remainder = μ̃ - μ/2 must be ≥ 0.
        let factor = crate::combin::falling_f64(2, 2) / 4.0;
        assert!((factor - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marginal_identities_on_random_tables() {
        for seed in 0..8u64 {
            let mu = SymMeasure::random(3, 5, seed).unwrap();
            let report = df_marginal_identities(&mu).unwrap();
            assert!(report.pass, "seed={seed}: {report:?}");
        }
    }

    #[test]
    fn tv_distance_examples() {
        let mu = anticorrelated();
        assert_eq!(tv_distance(&mu, &mu).unwrap(), 0.0);
        let a = SymMeasure::point_mass(2, 2, 0).unwrap();
        let b = SymMeasure::point_mass(2, 2, 1).unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), 2.0);
        // Anticorrelated fixture at n = 2: tv = 1 ≤ bound 2.
        let rows = df_gap_rows(&mu).unwrap();
        let row2 = rows.iter().find(|r| r.order == 2).unwrap();
        assert!((row2.tv - 1.0).abs() < 1e-14);
        assert!(row2.tv <= row2.bound);
    }

    #[test]
    fn tv_distance_rejects_shape_mismatch() {
        let a = SymMeasure::point_mass(2, 2, 0).unwrap();
        let b = SymMeasure::point_mass(3, 2, 0).unwrap();
        assert!(tv_distance(&a, &b).is_err());
    }

    #[test]
    fn tv_bounds_hold_on_random_grid() {
        for alphabet in 2..=4usize {
            for n_vars in 2..=8u32 {
                for seed in 0..3u64 {
                    let mu = SymMeasure::random(alphabet, n_vars, 100 + seed).unwrap();
                    for row in df_gap_rows(&mu).unwrap() {
                        assert!(
                            row.tv <= row.bound + 1e-12,
                            "K={alphabet} N={n_vars} n={} tv={} bound={}",
                            row.order,
                            row.tv,
                            row.bound
                        );
                        assert!(
                            row.tv <= row.refined_bound + 1e-12,
                            "K={alphabet} N={n_vars} n={} tv={} refined={}",
                            row.order,
                            row.tv,
                            row.refined_bound
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn from_probs_validates_symmetry() {
        // Asymmetric table must be rejected.
        let bad = alloc::vec![0.5, 0.5, 0.0, 0.0];
        assert!(SymMeasure::from_probs(2, 2, bad).is_err());
        let good = alloc::vec![0.25, 0.25, 0.25, 0.25];
        assert!(SymMeasure::from_probs(2, 2, good).is_ok());
    }

    #[test]
    fn random_tables_are_reproducible_and_symmetric() {
        let a = SymMeasure::random(4, 6, 7).unwrap();
        let b = SymMeasure::random(4, 6, 7).unwrap();
        assert_eq!(a, b);
        // Exact symmetry under a few transpositions.
        let mut digits = [0usize; 6];
        for x in (0..a.probs().len()).step_by(97) {
            decode(x, 4, 6, &mut digits);
            let mut swapped = digits;
            swapped.swap(0, 5);
            assert_eq!(a.prob(&digits), a.prob(&swapped));
        }
    }

    #[test]
    fn capacity_cap_enforced() {
        assert!(matches!(
            SymMeasure::product(&[0.5, 0.5], 32),
            Err(Error::Capacity { .. })
        ));
    }
}
