//! Experiment harness around `deflab-core`: configuration parsing,
//! subcommand dispatch, deterministic seeding and structured result
//! emission (CSV/JSON plus a run manifest with file digests).

pub mod commands;
pub mod config;
pub mod manifest;
pub mod wire;

/// Harness error, split by exit code: configuration problems exit with 2,
/// violated numeric assertions with 1.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration, unknown keys, unreadable files (exit 2).
    Config(String),
    /// A checked bound or invariant was violated during the run (exit 1).
    Assertion(String),
}

impl core::fmt::Display for CliError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Assertion(m) => write!(f, "assertion failure: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Assertion(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {e}"))
    }
}

impl From<deflab_core::Error> for CliError {
    fn from(e: deflab_core::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Format a float so that parsing the string returns the identical bits
/// (Rust's shortest round-trip representation).
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Resolve the worker-thread count: `DEFLAB_THREADS` overrides the config
/// key, which overrides the logical core count.
pub fn resolve_threads(config_threads: Option<usize>) -> usize {
    if let Ok(s) = std::env::var("DEFLAB_THREADS") {
        if let Ok(n) = s.parse::<usize>() {
            if n > 0 {
                return n;
            }
        }
    }
    config_threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    })
}

/// Run a closure inside a rayon pool of the resolved size. Results must be
/// collected in task order by the caller so the output is independent of
/// the pool size.
pub fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
