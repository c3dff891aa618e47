//! Command-line front-end for the `gmac-core` rate-region library: JSON
//! run configurations, a thread-pool executor, CSV/JSON tables and native
//! SVG plots.
//!
//! The binary is a thin wrapper around [`run`]; everything it does is
//! reachable from here.

pub mod commands;
pub mod config;
pub mod error;
pub mod executor;
pub mod output;
pub mod pmf;
pub mod svg;

use std::path::PathBuf;

pub use config::{Format, LoadedConfig, ModelTag};
pub use error::CliError;
pub use executor::{PoolExecutor, WORKERS_ENV};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Region,
    SumrateSir,
    Verify,
}

/// Resolved command-line options.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub workers: usize,
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Lines for standard output.
    pub report: Vec<String>,
    /// Set when a verification check failed; the files are written anyway.
    pub failure: Option<String>,
}

/// Run `command`; an explicit `model` must agree with the config.
pub fn run(command: Command, cfg: &LoadedConfig, model: Option<&str>, opts: &RunOptions) -> Result<Outcome, CliError> {
    if let Some(m) = model {
        let tag = ModelTag::parse(m).ok_or_else(|| {
            let known: Vec<&str> = ModelTag::ALL.iter().map(|t| t.tag()).collect();
            CliError::Config(format!("unknown model {m:?}; expected one of {}", known.join(", ")))
        })?;
        if tag != cfg.config.model {
            return Err(
                cfg.error_at("model", format!("--model {tag} does not match the config's model {}", cfg.config.model))
            );
        }
    }
    let exec = PoolExecutor::new(opts.workers).map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    let mut outcome = Outcome::default();
    match command {
        Command::Region => {
            let panels = commands::region::compute(cfg, &exec)?;
            for p in &panels {
                for c in &p.curves {
                    outcome.report.push(format!(
                        "{} {}: max R1 {:.6}, max R2 {:.6}, max R1+R2 {:.6}",
                        p.name,
                        c.label,
                        c.region.max_r1(),
                        c.region.max_r2(),
                        c.region.max_sum_rate()
                    ));
                }
                if let Some(x) = p.four_case_excess {
                    outcome.report.push(format!("{} four-case excess: {x:.3e}", p.name));
                }
            }
            outcome.files = commands::region::write(cfg, &panels, opts)?;
        }
        Command::SumrateSir => {
            let rows = commands::sir::compute(cfg, &exec)?;
            for r in &rows {
                outcome.report.push(format!(
                    "SIR {} dB: gdpc {:.6}, full cooperation {:.6}, no cooperation {:.6}",
                    r.sir_db, r.gdpc, r.full_cooperation, r.no_cooperation
                ));
            }
            outcome.files = commands::sir::write(cfg, &rows, opts)?;
        }
        Command::Verify => {
            let checks = commands::verify::compute(cfg, &exec)?;
            outcome.report = checks.iter().map(|c| c.line()).collect();
            let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if !failed.is_empty() {
                outcome.failure = Some(format!("{} check(s) failed: {}", failed.len(), failed.join(", ")));
            }
            outcome.files = commands::verify::write(&checks, opts)?;
        }
    }
    Ok(outcome)
}
