//! The `depfca` command line.
//!
//! Exit codes: 0 success or dependency holds, 1 dependency fails, 2 usage
//! error, 3 ingestion error, 4 capacity error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::context;
use crate::dmvd_lattice;
use crate::error::Error;
use crate::fd_discovery::{self, DiscoveryOptions};
use crate::mvd::{self, AttrPartition, Galois, GeneralizedMvd};
use crate::oracle;
use crate::partitions;
use crate::relation::{AttrSet, IngestOptions, Relation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INGESTION: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;
/// A broken internal invariant; not expected from any command.
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "depfca",
    version,
    about = "Dependency discovery with formal concept analysis"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Field delimiter (a single character, or "tab").
    #[arg(long, global = true, value_parser = parse_delimiter)]
    delimiter: Option<u8>,

    /// Drop exact duplicate rows, keeping the first.
    #[arg(long, global = true)]
    dedupe_rows: bool,

    /// Treat each empty cell as unequal to every other cell.
    #[arg(long, global = true)]
    null_distinct: bool,

    /// Tuple cap for class enumeration (check-mvd, gamma, lattice).
    #[arg(long, global = true)]
    max_tuples: Option<usize>,

    /// Largest left-hand side to search (discover-fd).
    #[arg(long, global = true)]
    max_lhs: Option<usize>,

    /// Output format (discover-fd, lattice).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Print the pairwise agreement context in Burmeister format.
    Binarize { csv: PathBuf },
    /// Check a functional dependency.
    CheckFd {
        csv: PathBuf,
        /// Comma-separated attribute names; empty for the empty set.
        #[arg(long, default_value = "")]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value_t = FdMethod::Partition)]
        method: FdMethod,
    },
    /// List all minimal non-trivial functional dependencies.
    DiscoverFd { csv: PathBuf },
    /// Check a generalized multivalued dependency `X ->> Y1|...|Ym`.
    CheckMvd {
        csv: PathBuf,
        #[arg(long, default_value = "")]
        lhs: String,
        /// Blocks separated by '|', names inside a block by ','.
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value_t = MvdMethod::Galois)]
        method: MvdMethod,
    },
    /// Print the closure of an attribute partition.
    Gamma {
        csv: PathBuf,
        /// e.g. "a|b,c|d"; must cover every attribute.
        #[arg(long)]
        partition: String,
    },
    /// Print the DMVD or MVD partition lattice.
    Lattice {
        csv: PathBuf,
        #[arg(long, value_enum)]
        kind: LatticeKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FdMethod {
    Partition,
    Context,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MvdMethod {
    Galois,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeKind {
    Dmvd,
    Mvd,
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "tab" | "\\t" => Ok(b'\t'),
        _ if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(format!("delimiter must be one ASCII character, got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs one command. Results go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Ingestion { .. } | Error::Io { .. } => EXIT_INGESTION,
                Error::Capacity { .. } => EXIT_CAPACITY,
                Error::Contract(_) => EXIT_USAGE,
                Error::InvariantViolation(_) => EXIT_INTERNAL,
            }
        }
    }
}

fn verb_name(verb: &Verb) -> &'static str {
    match verb {
        Verb::Binarize { .. } => "binarize",
        Verb::CheckFd { .. } => "check-fd",
        Verb::DiscoverFd { .. } => "discover-fd",
        Verb::CheckMvd { .. } => "check-mvd",
        Verb::Gamma { .. } => "gamma",
        Verb::Lattice { .. } => "lattice",
    }
}

fn validate_flags(cli: &Cli) -> Result<(), Failure> {
    let verb = verb_name(&cli.verb);
    let reject = |flag: &str| Failure::Usage(format!("{flag} does not apply to {verb}"));
    let takes_tuples = matches!(
        cli.verb,
        Verb::CheckMvd { .. } | Verb::Gamma { .. } | Verb::Lattice { .. }
    );
    if cli.max_tuples.is_some() && !takes_tuples {
        return Err(reject("--max-tuples"));
    }
    if cli.max_lhs.is_some() && !matches!(cli.verb, Verb::DiscoverFd { .. }) {
        return Err(reject("--max-lhs"));
    }
    if cli.format.is_some() && !matches!(cli.verb, Verb::DiscoverFd { .. } | Verb::Lattice { .. }) {
        return Err(reject("--format"));
    }
    if let Some(t) = cli.max_tuples {
        if t > mvd::HARD_MAX_TUPLES {
            return Err(Failure::Usage(format!(
                "--max-tuples {t} exceeds the enumeration ceiling of {}",
                mvd::HARD_MAX_TUPLES
            )));
        }
    }
    Ok(())
}

fn names_list(text: &str) -> Vec<&str> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn unknown_attr(rel: &Relation, e: Error) -> Failure {
    Failure::Usage(format!(
        "{}; available attributes: {}",
        match e {
            Error::Contract(m) => m,
            other => other.to_string(),
        },
        rel.attributes().join(", ")
    ))
}

fn resolve(rel: &Relation, text: &str) -> Result<AttrSet, Failure> {
    rel.attr_set_by_names(&names_list(text))
        .map_err(|e| unknown_attr(rel, e))
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    validate_flags(cli)?;
    let opts = IngestOptions {
        dedupe_rows: cli.dedupe_rows,
        null_distinct: cli.null_distinct,
        delimiter: cli.delimiter.unwrap_or(b','),
    };
    let max_tuples = cli.max_tuples.unwrap_or(mvd::DEFAULT_MAX_TUPLES);
    if max_tuples > mvd::DEFAULT_MAX_TUPLES {
        let _ = writeln!(
            err,
            "warning: --max-tuples {max_tuples} is above the default {}; class enumeration \
             visits up to 2^{max_tuples} tuple subsets per partition",
            mvd::DEFAULT_MAX_TUPLES
        );
    }
    let format = cli.format.unwrap_or(Format::Text);
    let write_err = |e: std::io::Error| Failure::Usage(format!("cannot write output: {e}"));

    match &cli.verb {
        Verb::Binarize { csv } => {
            let rel = Relation::load_csv(csv, opts)?;
            let ctx = context::binarize(&rel);
            out.write_all(ctx.to_burmeister().as_bytes())
                .map_err(write_err)?;
            Ok(EXIT_OK)
        }
        Verb::CheckFd {
            csv,
            lhs,
            rhs,
            method,
        } => {
            let rel = Relation::load_csv(csv, opts)?;
            let xs = resolve(&rel, lhs)?;
            let ys = resolve(&rel, rhs)?;
            if ys.is_empty() {
                return Err(Failure::Usage("--rhs names no attributes".into()));
            }
            let holds = match method {
                FdMethod::Partition => partitions::fd_holds(&rel, &xs, &ys),
                FdMethod::Context => context::implication_holds(&context::binarize(&rel), &xs, &ys),
                FdMethod::Oracle => oracle::oracle_fd(&rel, &xs, &ys),
            };
            verdict(out, holds).map_err(write_err)
        }
        Verb::DiscoverFd { csv } => {
            let rel = Relation::load_csv(csv, opts)?;
            let fds = fd_discovery::discover_with(
                &rel,
                &DiscoveryOptions {
                    max_lhs: cli.max_lhs,
                    ..Default::default()
                },
            )?;
            let text = match format {
                Format::Text => fds.iter().map(|fd| fd.display(&rel) + "\n").collect(),
                Format::Json => {
                    let named: Vec<_> = fds.iter().map(|fd| fd.named(&rel)).collect();
                    serde_json::to_string_pretty(&named).expect("serializable") + "\n"
                }
            };
            out.write_all(text.as_bytes()).map_err(write_err)?;
            Ok(EXIT_OK)
        }
        Verb::CheckMvd {
            csv,
            lhs,
            rhs,
            method,
        } => {
            let rel = Relation::load_csv(csv, opts)?;
            let xs = resolve(&rel, lhs)?;
            let blocks = mvd::parse_blocks(rhs, &rel).map_err(|e| unknown_attr(&rel, e))?;
            let d = GeneralizedMvd::new(xs, blocks, rel.n_attrs()).map_err(|e| {
                Failure::Usage(format!(
                    "--rhs must partition the attributes outside --lhs: {e}"
                ))
            })?;
            let holds = match method {
                MvdMethod::Galois => Galois::new(&rel, max_tuples)?.mvd_holds(&d),
                MvdMethod::Oracle => oracle::oracle_mvd(&rel, &d),
            };
            verdict(out, holds).map_err(write_err)
        }
        Verb::Gamma { csv, partition } => {
            let rel = Relation::load_csv(csv, opts)?;
            let p = AttrPartition::parse(partition, &rel).map_err(|e| unknown_attr(&rel, e))?;
            let closed = Galois::new(&rel, max_tuples)?.gamma(&p);
            writeln!(out, "{}", closed.display_with(rel.attributes())).map_err(write_err)?;
            Ok(EXIT_OK)
        }
        Verb::Lattice { csv, kind } => {
            let rel = Relation::load_csv(csv, opts)?;
            let lattice = match kind {
                LatticeKind::Dmvd => dmvd_lattice::dmvd_lattice(&rel),
                LatticeKind::Mvd => dmvd_lattice::mvd_lattice(&rel, max_tuples)?,
            };
            let text = match format {
                Format::Text => lattice.to_text(rel.attributes()),
                Format::Json => {
                    serde_json::to_string_pretty(&lattice.to_named(rel.attributes()))
                        .expect("serializable")
                        + "\n"
                }
            };
            out.write_all(text.as_bytes()).map_err(write_err)?;
            Ok(EXIT_OK)
        }
    }
}

fn verdict(out: &mut dyn Write, holds: bool) -> std::io::Result<i32> {
    if holds {
        writeln!(out, "HOLDS")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "FAILS")?;
        Ok(EXIT_FAILS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["depfca"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parse_delimiter_forms() {
        assert_eq!(parse_delimiter(";"), Ok(b';'));
        assert_eq!(parse_delimiter("tab"), Ok(b'\t'));
        assert!(parse_delimiter("ab").is_err());
    }

    #[test]
    fn unknown_verb_is_usage_error() {
        let (code, _, err) = run_args(&["frobnicate"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("discover-fd"));
    }

    #[test]
    fn inapplicable_flag_rejected_before_reading_input() {
        let (code, _, err) = run_args(&["binarize", "/nonexistent.csv", "--max-lhs", "2"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        assert!(err.contains("--max-lhs does not apply to binarize"));
    }

    #[test]
    fn missing_file_is_ingestion_error() {
        let (code, _, _) = run_args(&["binarize", "/nonexistent.csv"]);
        assert_eq!(code, EXIT_INGESTION);
    }
}
