//! `plotdata`: select and optionally aggregate columns of a results CSV
//! into a tidy CSV for external plotting. No plotting here.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{fmt_f64, CliError};

pub struct PlotSpec {
    /// Columns copied through (the grouping key when aggregating).
    pub keys: Vec<String>,
    /// Numeric column to emit (averaged over each key group with `mean`).
    pub value: String,
    /// `None`: plain selection. `Some("mean")`: average `value` per key.
    pub agg: Option<String>,
}

pub fn run(input: &Path, spec: &PlotSpec, output: &Path) -> Result<(), CliError> {
    let mut reader = csv::Reader::from_path(input)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Config(e.to_string()))?
        .clone();
    let col_index = |name: &str| -> Result<usize, CliError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Config(format!("unknown column \"{name}\"")))
    };
    let key_idx: Vec<usize> =
        spec.keys.iter().map(|k| col_index(k)).collect::<Result<_, _>>()?;
    let val_idx = col_index(&spec.value)?;
    if let Some(agg) = &spec.agg {
        if agg != "mean" {
            return Err(CliError::Config(format!("unknown aggregation \"{agg}\"")));
        }
    }

    let mut writer = csv::Writer::from_path(output)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut header: Vec<String> = spec.keys.clone();
    header.push(spec.value.clone());
    writer.write_record(&header).map_err(|e| CliError::Config(e.to_string()))?;

    if spec.agg.is_none() {
        for record in reader.records() {
            let record = record.map_err(|e| CliError::Config(e.to_string()))?;
            let mut row: Vec<String> =
                key_idx.iter().map(|&i| record[i].to_string()).collect();
            row.push(record[val_idx].to_string());
            writer.write_record(&row).map_err(|e| CliError::Config(e.to_string()))?;
        }
    } else {
        // Mean of the value column per key tuple, in first-seen key order.
        let mut order: Vec<Vec<String>> = Vec::new();
        let mut groups: BTreeMap<Vec<String>, (f64, usize)> = BTreeMap::new();
        for record in reader.records() {
            let record = record.map_err(|e| CliError::Config(e.to_string()))?;
            let key: Vec<String> = key_idx.iter().map(|&i| record[i].to_string()).collect();
            let value: f64 = record[val_idx]
                .parse()
                .map_err(|_| CliError::Config(format!("non-numeric value in \"{}\"", spec.value)))?;
            let entry = groups.entry(key.clone()).or_insert_with(|| {
                order.push(key);
                (0.0, 0)
            });
            entry.0 += value;
            entry.1 += 1;
        }
        for key in order {
            let (sum, count) = groups[&key];
            let mut row = key;
            row.push(fmt_f64(sum / count as f64));
            writer.write_record(&row).map_err(|e| CliError::Config(e.to_string()))?;
        }
    }
    writer.flush()?;
    Ok(())
}
