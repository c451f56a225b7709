//! Command-line front end.
//!
//! Exit codes: 0 success (or corner-free), 1 corner found, 2 usage or input
//! error, 3 resource cap exceeded.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::json;

use crate::behrend::{behrend_best_with_budget, DEFAULT_WORK_BUDGET};
use crate::corner::{find_corner, PointSet};
use crate::error::Error;
use crate::green::{c_target, choose_params, count_by_r, density_report, enumerate_a_r, ConstructionParams};
use crate::oracle::{max_corner_free_with_cap, DEFAULT_CAP};
use crate::report::{reports_to_csv, Sig6};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CORNER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable holding the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "CORNERFORGE_THREADS";

const DEFAULT_MAX_POINTS: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "cornerforge", version, about = "Construct, count and verify corner-free sets in [N]^2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate one slice A_r into a point-set file and report its density.
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        /// Squared radius; defaults to the most populous one.
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_POINTS)]
        max_points: u64,
    },
    /// Exact slice sizes for every radius.
    Count {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a point-set file for corners.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Best Behrend-sphere baseline at a given grid side.
    Behrend {
        #[arg(long)]
        n_target: BigUint,
        /// Per-shape cap on sphere-count work (multiply-accumulates).
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare the construction with the Behrend baseline at matched N.
    Compare {
        #[arg(long, value_delimiter = ',', required = true)]
        d_list: Vec<u32>,
        /// Grid side for the baseline; defaults to the construction's N.
        #[arg(long)]
        n_target: Option<BigUint>,
        /// Per-shape cap on sphere-count work for the baseline.
        #[arg(long, default_value_t = DEFAULT_WORK_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact maximum corner-free subset of [0, n)^2.
    Oracle {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u32,
    },
}

/// Failure of a subcommand, already mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => EXIT_RESOURCE,
            Error::Domain(_) | Error::Parse { .. } => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: format!("i/o error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) without running anything.
pub fn parse<I, T>(args: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(args)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Construct {
            q,
            d,
            r,
            out: path,
            max_points,
        } => run_construct(q, d, r, &path, max_points, out),
        Command::Count { q, d, format } => run_count(q, d, format, out),
        Command::Verify { input } => run_verify(&input, out),
        Command::Behrend {
            n_target,
            budget,
            format,
        } => run_behrend(&n_target, budget, format, out),
        Command::Compare {
            d_list,
            n_target,
            budget,
            format,
        } => run_compare(&d_list, n_target.as_ref(), budget, format, out),
        Command::Oracle { n, cap } => run_oracle(n, cap, out),
    }
}

fn run_construct(
    q: u32,
    d: u32,
    r: Option<u64>,
    path: &std::path::Path,
    max_points: u64,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let params = ConstructionParams::new(q, d, r)?;
    let report = density_report(&params)?;
    let params = params.with_r(report.r)?;
    let iter = enumerate_a_r(&params, max_points)?;
    let set = PointSet::from_points(iter.side(), iter)?;
    std::fs::write(path, set.to_text())?;
    writeln!(out, "{}", report.to_json())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CountRow {
    r: u64,
    count: String,
    best: bool,
}

fn run_count(q: u32, d: u32, format: Format, out: &mut dyn Write) -> Result<i32, Failure> {
    let table = count_by_r(q, d)?;
    let (best_r, best_count) = table.best();
    match format {
        Format::Json => {
            let entries: Vec<_> = table
                .entries
                .iter()
                .map(|(r, c)| json!({"r": r, "count": c.to_string()}))
                .collect();
            let doc = json!({
                "q": q,
                "d": d,
                "total": table.total().to_string(),
                "best": {"r": best_r, "count": best_count.to_string()},
                "entries": entries,
            });
            writeln!(out, "{doc}")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for (&r, c) in &table.entries {
                w.serialize(CountRow {
                    r,
                    count: c.to_string(),
                    best: r == best_r,
                })
                .map_err(|e| usage(e.to_string()))?;
            }
            out.write_all(&w.into_inner().map_err(|e| usage(e.to_string()))?)?;
        }
    }
    Ok(EXIT_OK)
}

fn run_verify(path: &std::path::Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let set = PointSet::parse(&text)?;
    match find_corner(&set) {
        None => {
            writeln!(out, "corner-free")?;
            Ok(EXIT_OK)
        }
        Some(w) => {
            writeln!(out, "{}", serde_json::to_string(&w).expect("witness serializes"))?;
            Ok(EXIT_CORNER)
        }
    }
}

fn run_behrend(
    n_target: &BigUint,
    budget: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let report = behrend_best_with_budget(n_target, budget)?.report()?;
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Csv => write!(out, "{}", reports_to_csv([&report]))?,
    }
    Ok(EXIT_OK)
}

fn run_compare(
    d_list: &[u32],
    n_target: Option<&BigUint>,
    budget: u64,
    format: Format,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if let Some(&d) = d_list.iter().find(|&&d| d <= 4) {
        return Err(usage(format!("construction degenerate: q < 2 (d = {d})")));
    }
    if let Some(n) = n_target {
        if *n < BigUint::from(3u32) {
            return Err(usage(format!("--n-target must be >= 3, got {n}")));
        }
    }
    let mut rows = Vec::new();
    for &d in d_list {
        let params = choose_params(d)?;
        let green = density_report(&params)?;
        let target = n_target.cloned().unwrap_or_else(|| params.n.clone());
        let behrend = behrend_best_with_budget(&target, budget)?.report()?;
        rows.push((d, green, behrend));
    }
    match format {
        Format::Json => {
            for (d, green, behrend) in &rows {
                let doc = json!({
                    "d": d,
                    "c_target": Sig6(c_target()),
                    "green": green.to_json_value(),
                    "behrend": behrend.to_json_value(),
                });
                writeln!(out, "{doc}")?;
            }
        }
        Format::Csv => {
            let reports = rows.iter().flat_map(|(_, g, b)| [g, b]);
            write!(out, "{}", reports_to_csv(reports))?;
        }
    }
    Ok(EXIT_OK)
}

fn run_oracle(n: u32, cap: u32, out: &mut dyn Write) -> Result<i32, Failure> {
    let result = max_corner_free_with_cap(n, cap)?;
    writeln!(out, "{}", result.to_json())?;
    Ok(EXIT_OK)
}

/// Reads [`THREADS_ENV`]; `None` when unset or 0 (automatic).
pub fn thread_count_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(format!("{THREADS_ENV} must be a nonnegative integer, got {v:?}")),
        },
    }
}

