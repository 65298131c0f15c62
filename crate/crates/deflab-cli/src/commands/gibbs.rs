//! `gibbs-sweep`: free-energy gap sweep at `T = tN`;
//! CSV `N,T,F_N,shifted,F_cl,mc_err,gap` plus a JSON summary.

use std::path::Path;

use deflab_core::gibbs::{gap_sweep, quantum_gibbs, McOptions};

use crate::config::GibbsSweepConfig;
use crate::{fmt_f64, CliError};

use super::{csv_writer, write_row, CommandOutcome};

pub fn run(cfg: &GibbsSweepConfig, out_dir: &Path) -> Result<CommandOutcome, CliError> {
    let ns = cfg.validate()?;
    let problem = cfg.problem.build()?;
    let mc = match (cfg.mc_samples, cfg.mc_seed) {
        (Some(samples), seed) => {
            Some(McOptions { samples: samples as usize, seed: seed.unwrap_or(0) as u64 })
        }
        (None, _) => None,
    };
    if problem.modes() != 2 && mc.is_none() {
        return Err(CliError::Config(
            "field \"mc_samples\": required when d != 2 (no quadrature path)".into(),
        ));
    }
    let sweep = gap_sweep(&problem, cfg.t, &ns, mc)?;

    let csv_path = out_dir.join("gibbs_sweep.csv");
    let mut w = csv_writer(&csv_path)?;
    write_row(&mut w, &["N", "T", "F_N", "shifted", "F_cl", "mc_err", "gap"].map(String::from))?;
    for row in &sweep.rows {
        write_row(
            &mut w,
            &[
                row.n_particles.to_string(),
                fmt_f64(row.temperature),
                fmt_f64(row.f_quantum),
                fmt_f64(row.shifted),
                fmt_f64(row.f_classical),
                fmt_f64(row.mc_error),
                fmt_f64(row.gap),
            ],
        )?;
    }
    w.flush()?;

    let summary_path = out_dir.join("summary.json");
    std::fs::write(
        &summary_path,
        serde_json::to_string_pretty(&serde_json::json!({
            "t": cfg.t,
            "f_classical": sweep.f_classical.value,
            "f_classical_stderr": sweep.f_classical.stderr,
            "f_classical_quadrature": sweep.f_classical.quadrature,
            "f_classical_monte_carlo": sweep.f_classical.monte_carlo,
            "max_gap_top_half": sweep.max_gap_top_half,
            "fit_c_gap_times_n_over_d": sweep.fit_c,
            "lower_bound_violations": sweep.lower_bound_violations,
        }))
        .unwrap(),
    )?;

    let mut files = vec![csv_path, summary_path];
    if cfg.export_spectrum {
        let n_top = *ns.iter().max().unwrap();
        let gibbs = quantum_gibbs(&problem, n_top, cfg.t * n_top as f64)?;
        let spectrum_path = out_dir.join("gibbs_spectrum.csv");
        crate::wire::write_spectrum_csv(&spectrum_path, &gibbs.spectrum())?;
        files.push(spectrum_path);
    }

    Ok(CommandOutcome {
        files,
        violations: sweep.lower_bound_violations,
        config_echo: serde_json::to_value(cfg).unwrap(),
        seed: cfg.mc_seed.unwrap_or(0),
    })
}
