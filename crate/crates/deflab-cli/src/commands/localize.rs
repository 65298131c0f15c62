//! `localize-check`: duality and consistency residuals of the Fock-space
//! localization on random (state, projector) pairs; CSV
//! `seed,duality,consistency_max` plus the blocks of the first instance.

use std::path::Path;

use deflab_core::derive_seed;
use deflab_core::localization::{check_consistency, check_duality, localize, Projector};
use deflab_core::states::DensityOp;
use deflab_core::symspace::{random_sphere_point, SymSector};
use deflab_core::CVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::LocalizeConfig;
use crate::{fmt_f64, CliError};

use super::{csv_writer, write_row, CommandOutcome};

pub fn run(cfg: &LocalizeConfig, out_dir: &Path) -> Result<CommandOutcome, CliError> {
    cfg.validate()?;
    let d = cfg.d as usize;
    let n = cfg.n as u32;
    let sector = SymSector::new(d, n)?;

    let csv_path = out_dir.join("localize_check.csv");
    let mut w = csv_writer(&csv_path)?;
    write_row(&mut w, &["seed", "duality", "consistency_max"].map(String::from))?;
    let mut violations = 0usize;
    let mut files = Vec::new();
    for s in 0..cfg.seeds as u64 {
        let instance_seed = derive_seed(cfg.seed as u64, s);
        let gamma = DensityOp::random(sector.clone(), 2.min(sector.dim()), instance_seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(instance_seed, 1));
        let span: Vec<CVector> =
            (0..cfg.rank as usize).map(|_| random_sphere_point(d, &mut rng)).collect();
        let projector = Projector::from_span(d, &span)?;

        let duality = check_duality(&gamma, &projector)?;
        let mut consistency = 0.0f64;
        for order in 1..=n {
            consistency = consistency.max(check_consistency(&gamma, &projector, order)?);
        }
        if duality >= 1e-12 || consistency >= 1e-10 {
            violations += 1;
        }
        write_row(
            &mut w,
            &[s.to_string(), fmt_f64(duality), fmt_f64(consistency)],
        )?;

        if s == 0 && cfg.export_blocks {
            let blocks = localize(&gamma, &projector)?;
            let blocks_path = out_dir.join("blocks.json");
            std::fs::write(
                &blocks_path,
                serde_json::to_string_pretty(&crate::wire::fock_blocks_json(&blocks)?).unwrap(),
            )?;
            files.push(blocks_path);
        }
    }
    w.flush()?;
    files.insert(0, csv_path);

    Ok(CommandOutcome {
        files,
        violations,
        config_echo: serde_json::to_value(cfg).unwrap(),
        seed: cfg.seed,
    })
}
