#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod table;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches};

use args::{Cli, Command};
use table::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] spin_coulomb::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Table plus the first tolerance failure, if any.
pub struct Report {
    pub table: Table,
    pub failure: Option<String>,
}

const EXIT_TOLERANCE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

fn provenance(m: &ArgMatches) -> Vec<(String, String)> {
    let root = Cli::command();
    let mut out = vec![("format".to_string(), m.get_raw("format").map(join).unwrap_or_default())];
    let Some((name, sub)) = m.subcommand() else { return out };
    let Some(cmd) = root.find_subcommand(name) else { return out };
    for a in cmd.get_arguments() {
        let id = a.get_id().as_str();
        if let Ok(Some(vals)) = sub.try_get_raw(id) {
            out.push((a.get_long().unwrap_or(id).to_string(), join(vals)));
        }
    }
    out
}

fn join(vals: clap::parser::RawValues<'_>) -> String {
    vals.map(|v| v.to_string_lossy().into_owned()).collect::<Vec<_>>().join(",")
}

fn stamp() -> String {
    let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

fn run(cli: &Cli, matches: &ArgMatches) -> Result<Option<String>, CliError> {
    let report = match &cli.command {
        Command::VerifyYm(a) => commands::ym::run(a)?,
        Command::Spectrum(a) => commands::spectrum::run(a)?,
        Command::KcrTable(a) => commands::tables::kcr(a)?,
        Command::Zmax(a) => commands::tables::zmax(a)?,
        Command::Orbit(a) => commands::orbit::run(a)?,
        Command::Forces(a) => commands::forces::run(a)?,
    };
    let mut table = report.table;
    table.params = provenance(matches);
    let stamp = cli.stamp.then(stamp);
    let text = table.render(cli.format, stamp.as_deref())?;
    table::emit(&text, cli.out.as_ref())?;
    Ok(report.failure)
}

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    let argv = match config::merge(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let matches = match Cli::command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    match run(&cli, &matches) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(msg)) => {
            eprintln!("tolerance failure: {msg}");
            ExitCode::from(EXIT_TOLERANCE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
