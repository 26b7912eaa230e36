//! Command-line front end: config resolution, dispatch and output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::time::Instant;

use crate::args::Cli;
use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{render, Header};

/// Environment variable consulted when no seed is given by flag or file.
pub const SEED_ENV: &str = "BRICKWORK_SEED";

/// Merges the config file (if any) with the flags; flags win.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let flags = cli.command.to_config();
    let Some(path) = &cli.command.common().config else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    let file = RunConfig::parse_file(&text)?;
    if let (Some(a), Some(b)) = (file.command, flags.command) {
        if a != b {
            return Err(CliError::invalid(format!("config file is for {a:?}, not {b:?}")));
        }
    }
    file.overlay(&flags)
}

fn resolve_seed(cfg: &mut RunConfig, from_flag: bool) -> Result<&'static str, CliError> {
    if cfg.seed.is_some() {
        return Ok(if from_flag { "flag" } else { "config" });
    }
    let (seed, source) = match std::env::var(SEED_ENV) {
        Ok(s) => {
            let v = s.trim().parse().map_err(|_| CliError::invalid(format!("{SEED_ENV} is not a u64: {s:?}")))?;
            (v, "env")
        }
        Err(_) => (0, "default"),
    };
    cfg.seed = Some(seed);
    Ok(source)
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Resource(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(_workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    Ok(f())
}

/// Runs one invocation and returns the rendered document together with the
/// number of failed checks.
pub fn run_to_string(cli: &Cli) -> Result<(String, Option<String>, usize, bool), CliError> {
    let mut cfg = resolve_config(cli)?;
    if cfg.workers == Some(0) {
        return Err(CliError::invalid("workers must be positive"));
    }
    let seed_source = resolve_seed(&mut cfg, cli.command.common().seed.is_some())?;
    let seed = cfg.seed.expect("seed resolved");
    let format = *cfg.format.get_or_insert(Format::Csv);
    let timing = cfg.timing.unwrap_or(false);
    let start = Instant::now();
    let workers = cfg.workers;
    let (cfg, outcome) = in_pool(workers, move || commands::execute(&mut cfg, seed).map(|o| (cfg, o)))??;
    let wall_time_s = timing.then(|| start.elapsed().as_secs_f64());
    let failed = outcome.checks.iter().filter(|c| !c.passed).count();
    let out = cfg.out.clone();
    let assert = cfg.assert.unwrap_or(false);
    let shown = RunConfig { out: None, ..cfg };
    let header = Header {
        tool: "brickwork",
        version: env!("CARGO_PKG_VERSION"),
        config: shown.to_json(),
        seed_source,
        oracle: outcome.oracle,
        summary: outcome.summary,
        checks: outcome.checks,
        wall_time_s,
    };
    Ok((render(&header, &outcome.table, format)?, out, failed, assert))
}

/// Runs one invocation, writing to `--out` or standard output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (doc, out, failed, assert) = run_to_string(cli)?;
    match out.as_deref() {
        None | Some("-") => {
            use std::io::Write;
            std::io::stdout().lock().write_all(doc.as_bytes())?;
        }
        Some(path) => std::fs::write(path, doc)?,
    }
    if assert && failed > 0 {
        return Err(CliError::Assert(failed));
    }
    Ok(())
}
