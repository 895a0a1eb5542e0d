//! Command-line front end.
//!
//! Exit codes: 0 stable (or oracles agree), 1 unstable, 2 marginal, 3 input
//! error, 4 critical-vertex verdict contradicted by an oracle, 5 I/O error.

pub mod render;
pub mod specfile;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::oracle;
use crate::sector::{family_check, Status};
use crate::types::validate_sector;
use crate::vertexgen::critical_walks;

pub use specfile::{FamilySpecFile, LoadedSpec, SpecError};

/// Default Monte Carlo sample count for `verify`.
pub const DEFAULT_SAMPLES: u64 = 1000;
/// Default Monte Carlo seed for `verify`.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Stable = 0,
    Unstable = 1,
    Marginal = 2,
    InputError = 3,
    OracleDisagreement = 4,
    IoError = 5,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_status(status: Status) -> Self {
        match status {
            Status::Stable => Exit::Stable,
            Status::Unstable => Exit::Unstable,
            Status::Marginal => Exit::Marginal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    /// JSON, stable across runs for identical inputs.
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "critvert", version, about = "Critical vertices for left-sector stability of interval polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the critical sign patterns for a sector and degree.
    Vertices {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Decide family stability from its critical vertices.
    Check {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Compare the critical-vertex verdict with exhaustive and Monte Carlo oracles.
    Verify {
        spec: PathBuf,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Write vertex roots and sector boundary rays as CSV.
    Roots {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    Exit::Stable.code()
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    Exit::InputError.code()
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(exit) => exit.code(),
        Err((exit, message)) => {
            let _ = writeln!(err, "error: {message}");
            exit.code()
        }
    }
}

type CmdResult = Result<Exit, (Exit, String)>;

fn input_error(e: impl std::fmt::Display) -> (Exit, String) {
    (Exit::InputError, e.to_string())
}

fn io_error(e: impl std::fmt::Display) -> (Exit, String) {
    (Exit::IoError, e.to_string())
}

fn execute(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Vertices { p, q, degree, format } => cmd_vertices(p, q, degree, format, out),
        Command::Check { spec, format } => cmd_check(&specfile::load(&spec).map_err(input_error)?, format, out),
        Command::Verify {
            spec,
            samples,
            seed,
            format,
        } => {
            let loaded = specfile::load(&spec).map_err(input_error)?;
            let samples = samples.or(loaded.samples).unwrap_or(DEFAULT_SAMPLES);
            let seed = seed.or(loaded.seed).unwrap_or(DEFAULT_SEED);
            cmd_verify(&loaded, samples, seed, format, out)
        }
        Command::Roots { spec, out: path } => {
            let loaded = specfile::load(&spec).map_err(input_error)?;
            cmd_roots(&loaded, &path)
        }
    }
}

pub fn cmd_vertices(p: i64, q: i64, degree: usize, format: Format, out: &mut dyn Write) -> CmdResult {
    let sector = validate_sector(p, q).map_err(input_error)?;
    if degree < 1 {
        return Err(input_error("degree must be at least 1"));
    }
    let walks = critical_walks(sector, degree);
    let text = match format {
        Format::Text => walks.iter().map(|w| format!("{}\n", w.pattern)).collect(),
        Format::Machine => render::vertices_json(sector, degree, &walks),
    };
    out.write_all(text.as_bytes()).map_err(io_error)?;
    Ok(Exit::Stable)
}

pub fn cmd_check(spec: &LoadedSpec, format: Format, out: &mut dyn Write) -> CmdResult {
    let report = family_check(&spec.family, spec.sector, &spec.tolerances).map_err(input_error)?;
    let text = match format {
        Format::Text => render::check_text(&report),
        Format::Machine => render::check_json(&report),
    };
    out.write_all(text.as_bytes()).map_err(io_error)?;
    Ok(Exit::from_status(report.family_status))
}

/// Whether the critical-vertex verdict contradicts an oracle. Differences
/// involving `Marginal` are not contradictions, and a Monte Carlo run that
/// misses an unstable region is not either.
pub fn contradicts(critical: Status, exhaustive: Status, monte_carlo: Status) -> bool {
    use Status::*;
    match critical {
        Stable => exhaustive == Unstable || monte_carlo == Unstable,
        Unstable => exhaustive == Stable,
        Marginal => false,
    }
}

pub fn cmd_verify(spec: &LoadedSpec, samples: u64, seed: u64, format: Format, out: &mut dyn Write) -> CmdResult {
    if samples < 1 {
        return Err(input_error("samples must be at least 1"));
    }
    let report = family_check(&spec.family, spec.sector, &spec.tolerances).map_err(input_error)?;
    let exhaustive = oracle::exhaustive_vertex_check(&spec.family, spec.sector, &spec.tolerances).map_err(input_error)?;
    let monte_carlo =
        oracle::monte_carlo_check(&spec.family, spec.sector, samples, seed, &spec.tolerances).map_err(input_error)?;
    let disagree = contradicts(report.family_status, exhaustive.status, monte_carlo.status);

    let comparison = render::Comparison {
        report: &report,
        exhaustive: &exhaustive,
        monte_carlo: &monte_carlo,
        agree: !disagree,
    };
    let text = match format {
        Format::Text => comparison.text(),
        Format::Machine => comparison.json(),
    };
    out.write_all(text.as_bytes()).map_err(io_error)?;
    Ok(if disagree { Exit::OracleDisagreement } else { Exit::Stable })
}

pub fn cmd_roots(spec: &LoadedSpec, path: &std::path::Path) -> CmdResult {
    let report = family_check(&spec.family, spec.sector, &spec.tolerances).map_err(input_error)?;
    let csv = render::roots_csv(&report);
    std::fs::write(path, csv).map_err(|e| io_error(format!("cannot write {}: {e}", path.display())))?;
    Ok(Exit::Stable)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contradiction_table() {
        use Status::*;
        assert!(!contradicts(Stable, Stable, Stable));
        assert!(!contradicts(Unstable, Unstable, Unstable));
        assert!(!contradicts(Unstable, Unstable, Stable));
        assert!(!contradicts(Marginal, Unstable, Stable));
        assert!(!contradicts(Stable, Marginal, Marginal));
        assert!(contradicts(Stable, Unstable, Stable));
        assert!(contradicts(Stable, Stable, Unstable));
        assert!(contradicts(Unstable, Stable, Stable));
    }

    #[test]
    fn vertices_text_output() {
        let mut out = Vec::new();
        let exit = cmd_vertices(1, 2, 7, Format::Text, &mut out).unwrap();
        assert_eq!(exit, Exit::Stable);
        assert_eq!(String::from_utf8(out).unwrap(), "++--++--\n+--++--+\n--++--++\n-++--++-\n");
    }

    #[test]
    fn vertices_input_errors() {
        let mut out = Vec::new();
        assert_eq!(cmd_vertices(2, 4, 3, Format::Text, &mut out).unwrap_err().0, Exit::InputError);
        assert_eq!(cmd_vertices(1, 2, 0, Format::Text, &mut out).unwrap_err().0, Exit::InputError);
    }
}
