//! Run manifest: the resolved configuration, seed, tool version,
//! timestamps and a digest of every emitted file. The configuration and
//! seed recorded here are sufficient to reproduce the outputs bit-exactly.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: i64,
    pub tool_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub outputs: Vec<FileDigest>,
}

pub fn now_unix() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

pub fn digest_file(path: &Path) -> Result<String, CliError> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Write `manifest.json` next to the outputs.
pub fn write_manifest(
    out_dir: &Path,
    command: &str,
    config: serde_json::Value,
    seed: i64,
    started_unix: f64,
    files: &[PathBuf],
) -> Result<PathBuf, CliError> {
    let mut outputs = Vec::new();
    for f in files {
        let rel = f.strip_prefix(out_dir).unwrap_or(f);
        outputs.push(FileDigest {
            path: rel.display().to_string(),
            sha256: digest_file(f)?,
        });
    }
    let manifest = RunManifest {
        command: command.to_string(),
        config,
        seed,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix,
        finished_unix: now_unix(),
        outputs,
    };
    let path = out_dir.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest).unwrap())?;
    Ok(path)
}
