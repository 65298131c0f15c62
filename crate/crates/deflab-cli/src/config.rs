//! Subcommand configuration schemas: JSON with unknown-key rejection and
//! range validation that names the offending field.

use deflab_core::hartree::HartreeProblem;
use deflab_core::symspace::{OneBodyOp, TwoBodyOp};
use serde::{Deserialize, Serialize};

use crate::wire::OneBodyJson;
use crate::CliError;

fn bad(field: &str, why: &str) -> CliError {
    CliError::Config(format!("field \"{field}\": {why}"))
}

fn require_positive(field: &str, value: i64) -> Result<u32, CliError> {
    if value < 1 {
        return Err(bad(field, &format!("must be ≥ 1, got {value}")));
    }
    u32::try_from(value).map_err(|_| bad(field, "out of range"))
}

fn require_non_negative(field: &str, value: i64) -> Result<u64, CliError> {
    if value < 0 {
        return Err(bad(field, &format!("must be ≥ 0, got {value}")));
    }
    Ok(value as u64)
}

/// One-body operator specification.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OneBodySpec {
    Diagonal { values: Vec<f64> },
    Random { seed: u64 },
    Matrix { re: Vec<f64>, im: Vec<f64> },
    Zero,
}

/// Two-body operator specification (on the symmetric 2-sector).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TwoBodySpec {
    Zero,
    Contact { mode: usize, strength: f64 },
    Random { seed: u64 },
    Matrix { re: Vec<f64>, im: Vec<f64> },
}

/// Mean-field problem instance `(d, h, w)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub d: i64,
    pub h: OneBodySpec,
    pub w: TwoBodySpec,
}

impl ProblemConfig {
    pub fn build(&self) -> Result<HartreeProblem, CliError> {
        let d = require_positive("d", self.d)? as usize;
        let h = match &self.h {
            OneBodySpec::Diagonal { values } => {
                if values.len() != d {
                    return Err(bad("h.values", "length must equal d"));
                }
                OneBodyOp::diagonal(values)
            }
            OneBodySpec::Random { seed } => OneBodyOp::random(d, *seed),
            OneBodySpec::Zero => OneBodyOp::zero(d),
            OneBodySpec::Matrix { re, im } => {
                let json = OneBodyJson { d, re: re.clone(), im: im.clone() };
                OneBodyOp::new(json.to_matrix()?)?
            }
        };
        let w = match &self.w {
            TwoBodySpec::Zero => TwoBodyOp::zero(d)?,
            TwoBodySpec::Contact { mode, strength } => {
                if *mode >= d {
                    return Err(bad("w.mode", "must be below d"));
                }
                TwoBodyOp::contact(d, *mode, *strength)?
            }
            TwoBodySpec::Random { seed } => TwoBodyOp::random(d, *seed)?,
            TwoBodySpec::Matrix { re, im } => {
                let dim = deflab_core::symspace::sector_dimension(d, 2)?;
                if re.len() != dim * dim || im.len() != dim * dim {
                    return Err(bad("w.re", "length must equal dim(Sym^2)^2"));
                }
                let mat = deflab_core::CMatrix::from_fn(dim, dim, |i, j| {
                    deflab_core::C64::new(re[i * dim + j], im[i * dim + j])
                });
                TwoBodyOp::new(d, mat)?
            }
        };
        Ok(HartreeProblem::new(h, w)?)
    }
}

/// `definetti-gap` sweep configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DefinettiGapConfig {
    pub d: i64,
    #[serde(rename = "N_min")]
    pub n_min: i64,
    #[serde(rename = "N_max")]
    pub n_max: i64,
    /// Reduced order; clamped to `min(n, N)` per row.
    pub n: i64,
    pub seeds: i64,
    #[serde(default)]
    pub seed: i64,
    /// Rank of the random input states.
    #[serde(default = "default_rank")]
    pub rank: i64,
    #[serde(default)]
    pub threads: Option<i64>,
}

fn default_rank() -> i64 {
    2
}

pub struct DefinettiGapPlan {
    pub d: usize,
    pub n_min: u32,
    pub n_max: u32,
    pub n_reduced: u32,
    pub seeds: u64,
    pub seed: u64,
    pub rank: usize,
    pub threads: Option<usize>,
}

impl DefinettiGapConfig {
    pub fn validate(&self) -> Result<DefinettiGapPlan, CliError> {
        let d = require_positive("d", self.d)? as usize;
        if d < 2 {
            return Err(bad("d", "must be ≥ 2"));
        }
        let n_min = require_positive("N_min", self.n_min)?;
        let n_max = require_positive("N_max", self.n_max)?;
        if n_max < n_min {
            return Err(bad("N_max", "must be ≥ N_min"));
        }
        let n_reduced = require_positive("n", self.n)?;
        let seeds = require_positive("seeds", self.seeds)? as u64;
        let seed = require_non_negative("seed", self.seed)?;
        let rank = require_positive("rank", self.rank)? as usize;
        let threads = match self.threads {
            None => None,
            Some(t) => Some(require_positive("threads", t)? as usize),
        };
        Ok(DefinettiGapPlan { d, n_min, n_max, n_reduced, seeds, seed, rank, threads })
    }
}

/// `df-classical` sweep configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DfClassicalConfig {
    #[serde(rename = "K")]
    pub k: i64,
    #[serde(rename = "N_min")]
    pub n_min: i64,
    #[serde(rename = "N_max")]
    pub n_max: i64,
    pub seeds: i64,
    #[serde(default)]
    pub seed: i64,
    /// Optional path to a table JSON; when given, the run verifies the
    /// marginal identities on that single table and exports its
    /// Diaconis-Freedman state instead of sweeping random tables.
    #[serde(default)]
    pub table_path: Option<String>,
    #[serde(default)]
    pub threads: Option<i64>,
}

impl DfClassicalConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let k = require_positive("K", self.k)?;
        if k < 2 {
            return Err(bad("K", "must be ≥ 2"));
        }
        let n_min = require_positive("N_min", self.n_min)?;
        let n_max = require_positive("N_max", self.n_max)?;
        if n_max < n_min {
            return Err(bad("N_max", "must be ≥ N_min"));
        }
        require_positive("seeds", self.seeds)?;
        require_non_negative("seed", self.seed)?;
        if let Some(t) = self.threads {
            require_positive("threads", t)?;
        }
        Ok(())
    }
}

/// `hartree-sweep` configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HartreeSweepConfig {
    pub problem: ProblemConfig,
    #[serde(rename = "N_list")]
    pub n_list: Vec<i64>,
    #[serde(default)]
    pub restarts: Option<i64>,
    #[serde(default)]
    pub threads: Option<i64>,
}

impl HartreeSweepConfig {
    pub fn validate(&self) -> Result<Vec<u32>, CliError> {
        if self.n_list.is_empty() {
            return Err(bad("N_list", "must be non-empty"));
        }
        let mut ns = Vec::new();
        for &n in &self.n_list {
            ns.push(require_positive("N_list", n)?);
        }
        if let Some(r) = self.restarts {
            require_positive("restarts", r)?;
        }
        if let Some(t) = self.threads {
            require_positive("threads", t)?;
        }
        Ok(ns)
    }
}

/// `gibbs-sweep` configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GibbsSweepConfig {
    pub problem: ProblemConfig,
    pub t: f64,
    #[serde(rename = "N_list")]
    pub n_list: Vec<i64>,
    #[serde(default)]
    pub mc_samples: Option<i64>,
    #[serde(default)]
    pub mc_seed: Option<i64>,
    /// Also export the spectrum of the Gibbs state at the largest `N`.
    #[serde(default)]
    pub export_spectrum: bool,
    #[serde(default)]
    pub threads: Option<i64>,
}

impl GibbsSweepConfig {
    pub fn validate(&self) -> Result<Vec<u32>, CliError> {
        if !(self.t > 0.0) {
            return Err(bad("t", "must be > 0"));
        }
        if self.n_list.is_empty() {
            return Err(bad("N_list", "must be non-empty"));
        }
        let mut ns = Vec::new();
        for &n in &self.n_list {
            let v = require_positive("N_list", n)?;
            if v < 2 {
                return Err(bad("N_list", "entries must be ≥ 2"));
            }
            ns.push(v);
        }
        if let Some(s) = self.mc_samples {
            require_positive("mc_samples", s)?;
        }
        if let Some(s) = self.mc_seed {
            require_non_negative("mc_seed", s)?;
        }
        if let Some(t) = self.threads {
            require_positive("threads", t)?;
        }
        Ok(ns)
    }
}

/// `localize-check` configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LocalizeConfig {
    pub d: i64,
    #[serde(rename = "N")]
    pub n: i64,
    pub seeds: i64,
    #[serde(default)]
    pub seed: i64,
    /// Rank of the random projector.
    #[serde(default = "default_one")]
    pub rank: i64,
    /// Export the blocks of the first instance.
    #[serde(default = "default_true")]
    pub export_blocks: bool,
    #[serde(default)]
    pub threads: Option<i64>,
}

fn default_one() -> i64 {
    1
}

fn default_true() -> bool {
    true
}

impl LocalizeConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let d = require_positive("d", self.d)?;
        if d < 2 {
            return Err(bad("d", "must be ≥ 2"));
        }
        require_positive("N", self.n)?;
        require_positive("seeds", self.seeds)?;
        require_non_negative("seed", self.seed)?;
        let rank = require_positive("rank", self.rank)?;
        if rank as i64 >= self.d {
            return Err(bad("rank", "must be below d"));
        }
        if let Some(t) = self.threads {
            require_positive("threads", t)?;
        }
        Ok(())
    }
}

/// `loggas` configuration (flag-overridable).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LoggasConfig {
    pub n: i64,
    pub beta: f64,
    /// Total Metropolis sweeps (burn-in included).
    pub steps: i64,
    #[serde(default)]
    pub seed: i64,
    /// Radial grid shells for the mean-field minimization.
    #[serde(default = "default_grid")]
    pub grid: i64,
    /// Regularization scale; grid spacing when omitted.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default = "default_burn_in")]
    pub burn_in: i64,
    #[serde(default = "default_true")]
    pub interaction: bool,
    #[serde(default = "default_max_radius")]
    pub max_radius: f64,
    /// Optional annealing grid for the free-energy estimate.
    #[serde(default)]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(default = "default_fe_samples")]
    pub fe_samples: i64,
    #[serde(default)]
    pub threads: Option<i64>,
}

fn default_grid() -> i64 {
    128
}

fn default_burn_in() -> i64 {
    10_000
}

fn default_max_radius() -> f64 {
    1.5
}

fn default_fe_samples() -> i64 {
    5_000
}

impl LoggasConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        require_positive("n", self.n)?;
        if !(self.beta > 0.0) {
            return Err(bad("beta", "must be > 0"));
        }
        let steps = require_positive("steps", self.steps)?;
        let burn_in = require_non_negative("burn_in", self.burn_in)?;
        if (steps as u64) < burn_in {
            return Err(bad("steps", "must be ≥ burn_in"));
        }
        require_non_negative("seed", self.seed)?;
        let grid = require_positive("grid", self.grid)?;
        if grid < 64 {
            return Err(bad("grid", "must be ≥ 64"));
        }
        if let Some(a) = self.alpha {
            if !(a >= 0.0) {
                return Err(bad("alpha", "must be ≥ 0"));
            }
        }
        if !(self.max_radius > 0.0) {
            return Err(bad("max_radius", "must be > 0"));
        }
        if let Some(g) = &self.beta_grid {
            if g.is_empty() || g.windows(2).any(|w| w[1] <= w[0]) {
                return Err(bad("beta_grid", "must be increasing and non-empty"));
            }
            require_positive("fe_samples", self.fe_samples)?;
        }
        if let Some(t) = self.threads {
            require_positive("threads", t)?;
        }
        Ok(())
    }
}

/// Parse a config file with unknown-key rejection, mapping serde errors to
/// configuration errors (exit 2).
pub fn parse_config<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected_with_name() {
        let text = r#"{"d": 2, "N_min": 1, "N_max": 8, "n": 2, "seeds": 10, "bogus": 1}"#;
        let err = serde_json::from_str::<DefinettiGapConfig>(text).unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn negative_values_name_the_field() {
        let cfg = LocalizeConfig {
            d: 2,
            n: -1,
            seeds: 1,
            seed: 0,
            rank: 1,
            export_blocks: false,
            threads: None,
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("\"N\""), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn problem_config_builds_fixture() {
        let text = r#"{
            "d": 2,
            "h": {"type": "diagonal", "values": [0.0, 1.0]},
            "w": {"type": "contact", "mode": 0, "strength": 2.0}
        }"#;
        let cfg: ProblemConfig = serde_json::from_str(text).unwrap();
        let p = cfg.build().unwrap();
        assert_eq!(p.modes(), 2);
    }
}
