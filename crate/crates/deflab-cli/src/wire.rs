//! JSON wire formats for operators, states, tables and localization
//! blocks, plus the CSV spectrum export.
//!
//! Operators and kets serialize as
//! `{"d": .., "N": .., "basis_order": "lex-desc", "re": [..], "im": [..]}`
//! with row-major matrix entries over the occupation basis; density
//! operators carry an extra `trace_tol`. Symmetric tables serialize as
//! `{"K": .., "N": .., "probs": [..]}` row-major.

use deflab_core::cdefinetti::SymMeasure;
use deflab_core::localization::FockBlocks;
use deflab_core::states::DensityOp;
use deflab_core::symspace::{Ket, SymSector};
use deflab_core::{C64, CMatrix, CVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Matrix or vector on a symmetric sector, row-major.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SectorArrayJson {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u32,
    /// Always `"lex-desc"`: the documented deterministic basis order.
    pub basis_order: String,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_tol: Option<f64>,
}

impl SectorArrayJson {
    pub fn check_basis_order(&self) -> Result<(), CliError> {
        if self.basis_order != "lex-desc" {
            return Err(CliError::Config(format!(
                "unsupported basis_order {:?} (expected \"lex-desc\")",
                self.basis_order
            )));
        }
        Ok(())
    }

    pub fn from_matrix(sector: &SymSector, mat: &CMatrix, trace_tol: Option<f64>) -> Self {
        let mut re = Vec::with_capacity(mat.len());
        let mut im = Vec::with_capacity(mat.len());
        for i in 0..mat.nrows() {
            for j in 0..mat.ncols() {
                re.push(mat[(i, j)].re);
                im.push(mat[(i, j)].im);
            }
        }
        SectorArrayJson {
            d: sector.modes(),
            n: sector.particles(),
            basis_order: "lex-desc".into(),
            re,
            im,
            trace_tol,
        }
    }

    pub fn to_matrix(&self) -> Result<(SymSector, CMatrix), CliError> {
        self.check_basis_order()?;
        let sector = SymSector::new(self.d, self.n)?;
        let dim = sector.dim();
        if self.re.len() != dim * dim || self.im.len() != dim * dim {
            return Err(CliError::Config(format!(
                "matrix payload length {} does not match sector dimension {dim}",
                self.re.len()
            )));
        }
        let mat = CMatrix::from_fn(dim, dim, |i, j| {
            C64::new(self.re[i * dim + j], self.im[i * dim + j])
        });
        Ok((sector, mat))
    }

    pub fn from_ket(ket: &Ket) -> Self {
        SectorArrayJson {
            d: ket.sector().modes(),
            n: ket.sector().particles(),
            basis_order: "lex-desc".into(),
            re: ket.amplitudes().iter().map(|z| z.re).collect(),
            im: ket.amplitudes().iter().map(|z| z.im).collect(),
            trace_tol: None,
        }
    }

    pub fn to_ket(&self) -> Result<Ket, CliError> {
        self.check_basis_order()?;
        let sector = SymSector::new(self.d, self.n)?;
        if self.re.len() != sector.dim() {
            return Err(CliError::Config("ket payload length mismatch".into()));
        }
        let amps = CVector::from_fn(sector.dim(), |i, _| C64::new(self.re[i], self.im[i]));
        Ok(Ket::new(sector, amps)?)
    }

    pub fn from_density(gamma: &DensityOp) -> Self {
        SectorArrayJson::from_matrix(
            gamma.sector(),
            gamma.matrix(),
            Some(deflab_core::tol::TOL.trace_one),
        )
    }

    pub fn to_density(&self) -> Result<DensityOp, CliError> {
        let (sector, mat) = self.to_matrix()?;
        Ok(DensityOp::new(sector, mat)?)
    }
}

/// One-body operator (`N = 1` sector array without the sector wrapper).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OneBodyJson {
    pub d: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl OneBodyJson {
    pub fn from_matrix(mat: &CMatrix) -> Self {
        let d = mat.nrows();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                re.push(mat[(i, j)].re);
                im.push(mat[(i, j)].im);
            }
        }
        OneBodyJson { d, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, CliError> {
        if self.re.len() != self.d * self.d || self.im.len() != self.d * self.d {
            return Err(CliError::Config("one-body payload length mismatch".into()));
        }
        Ok(CMatrix::from_fn(self.d, self.d, |i, j| {
            C64::new(self.re[i * self.d + j], self.im[i * self.d + j])
        }))
    }
}

/// Symmetric probability table `{K, N, probs}` (row-major configurations).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SymMeasureJson {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub probs: Vec<f64>,
}

impl SymMeasureJson {
    pub fn from_measure(mu: &SymMeasure) -> Self {
        SymMeasureJson { k: mu.alphabet(), n: mu.vars(), probs: mu.probs().to_vec() }
    }

    pub fn to_measure(&self) -> Result<SymMeasure, CliError> {
        Ok(SymMeasure::from_probs(self.k, self.n, self.probs.clone())?)
    }
}

/// One localization block `(k, trace, operator)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FockBlockJson {
    pub k: u32,
    pub trace: f64,
    pub operator: SectorArrayJson,
}

/// Serialize localization blocks as a JSON array of block records.
pub fn fock_blocks_json(blocks: &FockBlocks) -> Result<Vec<FockBlockJson>, CliError> {
    let mut out = Vec::new();
    let traces = blocks.traces();
    for (k, block) in blocks.blocks.iter().enumerate() {
        if block.nrows() == 0 {
            continue;
        }
        let sector = SymSector::new(blocks.range_rank.max(1), k as u32)?;
        out.push(FockBlockJson {
            k: k as u32,
            trace: traces[k],
            operator: SectorArrayJson::from_matrix(&sector, block, None),
        });
    }
    Ok(out)
}

/// Write a spectrum as CSV with header `index,eigenvalue`.
pub fn write_spectrum_csv(path: &std::path::Path, spectrum: &[f64]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Config(e.to_string()))?;
    w.write_record(["index", "eigenvalue"]).map_err(|e| CliError::Config(e.to_string()))?;
    for (i, v) in spectrum.iter().enumerate() {
        w.write_record([i.to_string(), crate::fmt_f64(*v)])
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use deflab_core::symspace::product_embed;

    #[test]
    fn density_round_trip() {
        let sector = SymSector::new(2, 3).unwrap();
        let gamma = DensityOp::random(sector, 2, 5).unwrap();
        let json = SectorArrayJson::from_density(&gamma);
        let text = serde_json::to_string(&json).unwrap();
        let back: SectorArrayJson = serde_json::from_str(&text).unwrap();
        let gamma2 = back.to_density().unwrap();
        assert_eq!(gamma.matrix(), gamma2.matrix());
    }

    #[test]
    fn ket_round_trip_and_basis_order_check() {
        let u = CVector::from_vec(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]);
        let ket = product_embed(&u, 2).unwrap();
        let json = SectorArrayJson::from_ket(&ket);
        assert_eq!(json.basis_order, "lex-desc");
        let back = json.to_ket().unwrap();
        assert_eq!(ket.amplitudes(), back.amplitudes());

        let mut bad = SectorArrayJson::from_ket(&ket);
        bad.basis_order = "colex".into();
        assert!(bad.to_ket().is_err());
    }

    #[test]
    fn table_round_trip() {
        let mu = SymMeasure::random(3, 4, 9).unwrap();
        let json = SymMeasureJson::from_measure(&mu);
        let text = serde_json::to_string(&json).unwrap();
        let back: SymMeasureJson = serde_json::from_str(&text).unwrap();
        let mu2 = back.to_measure().unwrap();
        assert_eq!(mu.probs(), mu2.probs());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"K": 2, "N": 2, "probs": [0.25,0.25,0.25,0.25], "extra": 1}"#;
        let parsed: Result<SymMeasureJson, _> = serde_json::from_str(text);
        assert!(parsed.unwrap_err().to_string().contains("extra"));
    }
}
