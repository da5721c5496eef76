//! Command-line front end: resolves a [`RunConfig`], runs one command, and
//! renders its table as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::io::Write;

use thiserror::Error;

pub use commands::{cmd_compare, cmd_evolve, cmd_exact, cmd_models, cmd_simulate, cmd_sweep};
pub use config::{Against, Cli, Command, Format, Grid, RunConfig};
pub use output::{Cell, Report, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] degchain_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("threshold not met: {0}")]
    Threshold(String),
}

impl CliError {
    /// 2 usage or config, 3 numerical, 4 compare threshold.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Core(degchain_core::Error::Param(_)) => 2,
            CliError::Core(_) => 3,
            CliError::Threshold(_) => 4,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Exact => cmd_exact(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Compare => cmd_compare(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Models => cmd_models(cfg),
    }
}

/// Writes the rendered report to the configured path, or stdout.
pub fn write_report(cfg: &RunConfig, report: &Report) -> Result<(), CliError> {
    let text = report.render(cfg);
    match cfg.output_path() {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|source| CliError::Io {
                    path: dir.display().to_string(),
                    source,
                })?;
            }
            fs::write(&path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

/// Runs and writes; a missed compare threshold is reported after the output
/// has been written.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let report = run(cfg)?;
    write_report(cfg, &report)?;
    if let Some(msg) = &report.threshold_failure {
        return Err(CliError::Threshold(msg.clone()));
    }
    Ok(report)
}
