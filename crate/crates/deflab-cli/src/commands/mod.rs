//! Subcommand implementations. Each command validates its configuration,
//! emits CSV/JSON results into the output directory and returns the list
//! of files it wrote; the dispatcher adds the run manifest.

pub mod definetti;
pub mod dfclassical;
pub mod gibbs;
pub mod hartree;
pub mod localize;
pub mod loggas;
pub mod plotdata;

use std::path::{Path, PathBuf};

use crate::manifest::{now_unix, write_manifest};
use crate::CliError;

/// Outcome of a subcommand: emitted files and the number of violated
/// assertions (non-zero means exit code 1).
pub struct CommandOutcome {
    pub files: Vec<PathBuf>,
    pub violations: usize,
    /// Resolved configuration echo for the manifest.
    pub config_echo: serde_json::Value,
    /// Master seed recorded in the manifest.
    pub seed: i64,
}

/// Run a command and write the manifest; returns the process exit code.
pub fn dispatch(
    name: &str,
    run: impl FnOnce() -> Result<CommandOutcome, CliError>,
    out_dir: &Path,
) -> i32 {
    let started = now_unix();
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        eprintln!("configuration error: cannot create {}: {e}", out_dir.display());
        return 2;
    }
    match run() {
        Ok(outcome) => {
            match write_manifest(
                out_dir,
                name,
                outcome.config_echo,
                outcome.seed,
                started,
                &outcome.files,
            ) {
                Ok(_) => {
                    if outcome.violations > 0 {
                        eprintln!(
                            "assertion failure: {} violated bound(s); see outputs in {}",
                            outcome.violations,
                            out_dir.display()
                        );
                        1
                    } else {
                        0
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, CliError> {
    csv::Writer::from_path(path).map_err(|e| CliError::Config(e.to_string()))
}

pub(crate) fn write_row(
    w: &mut csv::Writer<std::fs::File>,
    fields: &[String],
) -> Result<(), CliError> {
    w.write_record(fields).map_err(|e| CliError::Config(e.to_string()))
}
