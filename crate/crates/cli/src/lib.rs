//! Command-line front end: parameter sweeps written as CSV or JSON tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use crate::args::{Cli, Command, Common, Format};
use crate::table::Table;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("numerical failure: {0}")]
    Numerical(giantatom_core::Error),
}

impl From<giantatom_core::Error> for CliError {
    fn from(e: giantatom_core::Error) -> Self {
        use giantatom_core::Error as E;
        match e {
            E::InvalidParams(_) | E::SpanExceedsLattice { .. } => CliError::Usage(e.to_string()),
            e => CliError::Numerical(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Clap(e) => e.exit_code(),
            CliError::Io(_) => 1,
            CliError::Numerical(_) => 3,
        }
    }
}

fn emit(table: &Table, common: &Common, config: &impl Serialize, command_line: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut sink: Box<dyn Write + '_> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(stdout),
    };
    write_table(table, common.format, config, command_line, &mut sink)?;
    sink.flush()?;
    Ok(())
}

fn write_table(
    table: &Table,
    format: Format,
    config: &impl Serialize,
    command_line: &str,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Csv => table.write_csv(w)?,
        Format::Json => {
            let value = table.to_json(config, command_line);
            serde_json::to_writer_pretty(&mut *w, &value).map_err(std::io::Error::from)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn write_file(path: &Path, table: &Table, format: Format, config: &impl Serialize, command_line: &str) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_table(table, format, config, command_line, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses `argv` (program name first), runs the command and writes the table
/// to `--out` or to `stdout`.
pub fn run(argv: Vec<OsString>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let command_line = std::iter::once("giantatom".to_string())
        .chain(argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    let cli = Cli::try_parse_from(config::expand_args(argv)?)?;
    match &cli.command {
        Command::Reflection(a) => emit(&commands::cmd_reflection(a)?, &a.common, a, &command_line, stdout),
        Command::Bound(a) => {
            let (table, dump) = commands::cmd_bound(a)?;
            if let Some(path) = &a.dump {
                write_file(path, &dump, a.common.format, a, &command_line)?;
            }
            emit(&table, &a.common, a, &command_line, stdout)
        }
        Command::Spectrum(a) => emit(&commands::cmd_spectrum(a)?, &a.common, a, &command_line, stdout),
        Command::Distribution(a) => emit(&commands::cmd_distribution(a)?, &a.common, a, &command_line, stdout),
        Command::Critical(a) => emit(&commands::cmd_critical(a)?, &a.common, a, &command_line, stdout),
    }
}
