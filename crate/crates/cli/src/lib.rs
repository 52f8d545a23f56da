//! Library side of the `twokaon` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod verify;

use std::io::Write;

use commands::Report;
use config::{Format, RunConfig};
use error::{exit, CliError, CliResult};

/// Serialized table in the configured format.
pub fn render(cfg: &RunConfig, report: &Report) -> String {
    match cfg.format {
        Format::Csv => report.table.to_csv(),
        Format::Json => {
            let mut meta = cfg.echo();
            meta.insert("version", env!("CARGO_PKG_VERSION").to_string());
            report.table.to_json(&meta)
        }
    }
}

/// Run, emit, and return the process exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    match try_execute(cfg) {
        Ok(true) => exit::SUCCESS,
        Ok(false) => exit::VERIFICATION_FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn try_execute(cfg: &RunConfig) -> CliResult<bool> {
    let report = commands::run(cfg)?;
    let text = render(cfg, &report);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    let mut err = std::io::stderr().lock();
    for line in &report.summary {
        writeln!(err, "{line}")?;
    }
    Ok(report.passed)
}

pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Config(_) => exit::CONFIG_ERROR,
        CliError::Core(twokaon::Error::Validation(_) | twokaon::Error::Domain(_)) => {
            exit::CONFIG_ERROR
        }
        CliError::Core(_) | CliError::Io(_) => exit::VERIFICATION_FAILURE,
    }
}
