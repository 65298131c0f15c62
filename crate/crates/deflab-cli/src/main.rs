//! `deflab`: experiment harness for the symmetric-sector laboratory.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use deflab_cli::commands::{self, plotdata::PlotSpec};
use deflab_cli::config::{
    parse_config, DefinettiGapConfig, DfClassicalConfig, GibbsSweepConfig, HartreeSweepConfig,
    LocalizeConfig, LoggasConfig,
};
use deflab_cli::CliError;

#[derive(Parser)]
#[command(
    name = "deflab",
    version,
    about = "Bosonic de Finetti and mean-field numerical laboratory",
    long_about = "Sweeps and checks around finite-dimensional bosonic sectors: the \
quantitative quantum de Finetti bound, Diaconis-Freedman tables, Hartree and Gibbs \
mean-field limits, Fock-space localization and a 2D log-gas experiment. Every run \
emits CSV/JSON results plus a manifest with digests; same config and seed give \
byte-identical outputs. DEFLAB_THREADS overrides the worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigRun {
    /// Path to the JSON configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Quantitative de Finetti gap sweep over random states.
    DefinettiGap(ConfigRun),
    /// Diaconis-Freedman identities and TV bounds on symmetric tables.
    DfClassical(ConfigRun),
    /// Ground-energy convergence to the Hartree minimum.
    HartreeSweep(ConfigRun),
    /// Free-energy gap sweep at temperature T = tN.
    GibbsSweep(ConfigRun),
    /// Fock-space localization duality and consistency residuals.
    LocalizeCheck(ConfigRun),
    /// 2D log-gas Metropolis experiment with mean-field comparison.
    Loggas(LoggasArgs),
    /// Select/aggregate columns of a results CSV for external plotting.
    Plotdata(PlotdataArgs),
}

#[derive(Args)]
struct LoggasArgs {
    /// Optional JSON configuration (flags below override its fields).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Particle count.
    #[arg(long)]
    n: Option<i64>,
    /// Inverse temperature.
    #[arg(long)]
    beta: Option<f64>,
    /// Total Metropolis sweeps (burn-in included).
    #[arg(long)]
    steps: Option<i64>,
    #[arg(long)]
    seed: Option<i64>,
    /// Radial grid shells for the mean-field minimization.
    #[arg(long)]
    grid: Option<i64>,
    /// Regularization scale of the log kernel (grid spacing when omitted).
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct PlotdataArgs {
    /// Results CSV produced by one of the run commands.
    #[arg(long)]
    input: PathBuf,
    /// Key columns, comma separated (copied through / grouped by).
    #[arg(long, value_delimiter = ',')]
    keys: Vec<String>,
    /// Value column.
    #[arg(long)]
    value: String,
    /// Aggregation over each key group ("mean").
    #[arg(long)]
    agg: Option<String>,
    /// Output CSV path.
    #[arg(long)]
    output: PathBuf,
}

fn loggas_config(args: &LoggasArgs) -> Result<LoggasConfig, CliError> {
    let mut cfg: LoggasConfig = match &args.config {
        Some(path) => parse_config(path)?,
        None => {
            let (Some(n), Some(beta), Some(steps)) = (args.n, args.beta, args.steps) else {
                return Err(CliError::Config(
                    "loggas needs --config or all of --n, --beta, --steps".into(),
                ));
            };
            LoggasConfig {
                n,
                beta,
                steps,
                seed: 0,
                grid: 128,
                alpha: None,
                burn_in: 10_000,
                interaction: true,
                max_radius: 1.5,
                beta_grid: None,
                fe_samples: 5_000,
                threads: None,
            }
        }
    };
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(beta) = args.beta {
        cfg.beta = beta;
    }
    if let Some(steps) = args.steps {
        cfg.steps = steps;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(grid) = args.grid {
        cfg.grid = grid;
    }
    if let Some(alpha) = args.alpha {
        cfg.alpha = Some(alpha);
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::DefinettiGap(run) => {
            let cfg: Result<DefinettiGapConfig, _> = parse_config(&run.config);
            match cfg {
                Ok(cfg) => commands::dispatch(
                    "definetti-gap",
                    || commands::definetti::run(&cfg, &run.out),
                    &run.out,
                ),
                Err(e) => config_fail(e),
            }
        }
        Command::DfClassical(run) => {
            let cfg: Result<DfClassicalConfig, _> = parse_config(&run.config);
            match cfg {
                Ok(cfg) => commands::dispatch(
                    "df-classical",
                    || commands::dfclassical::run(&cfg, &run.out),
                    &run.out,
                ),
                Err(e) => config_fail(e),
            }
        }
        Command::HartreeSweep(run) => {
            let cfg: Result<HartreeSweepConfig, _> = parse_config(&run.config);
            match cfg {
                Ok(cfg) => commands::dispatch(
                    "hartree-sweep",
                    || commands::hartree::run(&cfg, &run.out),
                    &run.out,
                ),
                Err(e) => config_fail(e),
            }
        }
        Command::GibbsSweep(run) => {
            let cfg: Result<GibbsSweepConfig, _> = parse_config(&run.config);
            match cfg {
                Ok(cfg) => commands::dispatch(
                    "gibbs-sweep",
                    || commands::gibbs::run(&cfg, &run.out),
                    &run.out,
                ),
                Err(e) => config_fail(e),
            }
        }
        Command::LocalizeCheck(run) => {
            let cfg: Result<LocalizeConfig, _> = parse_config(&run.config);
            match cfg {
                Ok(cfg) => commands::dispatch(
                    "localize-check",
                    || commands::localize::run(&cfg, &run.out),
                    &run.out,
                ),
                Err(e) => config_fail(e),
            }
        }
        Command::Loggas(args) => match loggas_config(&args) {
            Ok(cfg) => commands::dispatch(
                "loggas",
                || commands::loggas::run(&cfg, &args.out),
                &args.out,
            ),
            Err(e) => config_fail(e),
        },
        Command::Plotdata(args) => {
            let spec = PlotSpec {
                keys: args.keys.clone(),
                value: args.value.clone(),
                agg: args.agg.clone(),
            };
            match commands::plotdata::run(&args.input, &spec, &args.output) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("{e}");
                    e.exit_code()
                }
            }
        }
    };
    ExitCode::from(code as u8)
}

fn config_fail(e: CliError) -> i32 {
    eprintln!("{e}");
    e.exit_code()
}
