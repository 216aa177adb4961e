//! CSV, JSON and plain-text emission for command results.
//!
//! CSV column orders are fixed:
//!
//! | record | columns |
//! |---|---|
//! | bounds | `d1,d2,eta,mean_eta,q,lb_alves,lb_biregular,ub_root,ub_closed,root_iterations,tol` |
//! | table1 | `d1,d2,lb_alves,lb_biregular,ub_root` (four decimals) |
//! | roots | `n,ub_root_n,ub_root,gap` |
//! | sweep | `p,replicas,survived,fraction,ci_lo,ci_hi` |
//! | check | `suite,invariant,passed,detail` |
//!
//! Every JSON object carries `"schema_version"`; a command emits a JSON
//! array of such objects.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bounds::{round4, BoundsReport};
use crate::checks::CheckRow;
use crate::sim::SweepPoint;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Pretty,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to the caller's stream (standard output for the binary).
    pub path: Option<PathBuf>,
}

impl OutputSpec {
    /// Opens the destination, falling back to `stdout` when no path is set.
    pub fn open<'a>(&self, stdout: &'a mut dyn Write) -> io::Result<Box<dyn Write + 'a>> {
        Ok(match &self.path {
            Some(path) => Box::new(io::BufWriter::new(File::create(path)?)),
            None => Box::new(stdout),
        })
    }
}

#[derive(Serialize)]
struct Versioned<'a, T> {
    schema_version: u32,
    #[serde(flatten)]
    record: &'a T,
}

/// Writes `records` as a JSON array of versioned objects.
pub fn write_json<T: Serialize>(w: &mut dyn Write, records: &[T]) -> io::Result<()> {
    let wrapped: Vec<_> = records.iter().map(|record| Versioned { schema_version: SCHEMA_VERSION, record }).collect();
    serde_json::to_writer_pretty(&mut *w, &wrapped)?;
    writeln!(w)
}

fn write_csv(w: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()
}

fn write_pretty(w: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> io::Result<()> {
    let rows: Vec<Vec<String>> = rows.into_iter().collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line =
        |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    writeln!(w, "{}", line(header.to_vec()))?;
    for row in &rows {
        writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn table(
    w: &mut dyn Write,
    format: Format,
    header: &[&str],
    csv_rows: impl IntoIterator<Item = Vec<String>>,
    pretty_rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(w, header, csv_rows),
        Format::Pretty => write_pretty(w, header, pretty_rows),
        Format::Json => unreachable!("JSON is written by serde"),
    }
}

fn full(x: f64) -> String {
    format!("{x}")
}

fn four(x: f64) -> String {
    format!("{:.4}", round4(x))
}

pub const BOUNDS_COLUMNS: [&str; 11] =
    ["d1", "d2", "eta", "mean_eta", "q", "lb_alves", "lb_biregular", "ub_root", "ub_closed", "root_iterations", "tol"];

pub fn write_bounds(w: &mut dyn Write, format: Format, rows: &[BoundsReport]) -> io::Result<()> {
    if format == Format::Json {
        return write_json(w, rows);
    }
    let cells = |r: &BoundsReport, num: fn(f64) -> String| {
        vec![
            r.d1.to_string(),
            r.d2.to_string(),
            r.eta.clone(),
            num(r.mean_eta),
            num(r.q),
            num(r.lb_alves),
            num(r.lb_biregular),
            num(r.ub_root),
            r.ub_closed.map(num).unwrap_or_default(),
            r.root_iterations.to_string(),
            format!("{:e}", r.tol),
        ]
    };
    table(w, format, &BOUNDS_COLUMNS, rows.iter().map(|r| cells(r, full)), rows.iter().map(|r| cells(r, four)))
}

pub const TABLE1_COLUMNS: [&str; 5] = ["d1", "d2", "lb_alves", "lb_biregular", "ub_root"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub d1: u32,
    pub d2: u32,
    pub lb_alves: f64,
    pub lb_biregular: f64,
    pub ub_root: f64,
}

impl From<&BoundsReport> for Table1Row {
    fn from(r: &BoundsReport) -> Self {
        Self { d1: r.d1, d2: r.d2, lb_alves: r.lb_alves, lb_biregular: r.lb_biregular, ub_root: r.ub_root }
    }
}

pub fn write_table1(w: &mut dyn Write, format: Format, rows: &[BoundsReport]) -> io::Result<()> {
    let rows: Vec<Table1Row> = rows.iter().map(Table1Row::from).collect();
    if format == Format::Json {
        return write_json(w, &rows);
    }
    let cells = |r: &Table1Row| {
        vec![r.d1.to_string(), r.d2.to_string(), four(r.lb_alves), four(r.lb_biregular), four(r.ub_root)]
    };
    table(w, format, &TABLE1_COLUMNS, rows.iter().map(cells), rows.iter().map(cells))
}

pub const ROOTS_COLUMNS: [&str; 4] = ["n", "ub_root_n", "ub_root", "gap"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub n: u32,
    /// `None` when `f_n < 0` on all of `(0, 1)`, i.e. the `n`-th bound is vacuous.
    pub ub_root_n: Option<f64>,
    pub ub_root: f64,
    pub gap: Option<f64>,
}

pub fn write_roots(w: &mut dyn Write, format: Format, rows: &[RootRow]) -> io::Result<()> {
    if format == Format::Json {
        return write_json(w, rows);
    }
    let cells = |r: &RootRow, num: fn(f64) -> String| {
        vec![
            r.n.to_string(),
            r.ub_root_n.map(num).unwrap_or_default(),
            num(r.ub_root),
            r.gap.map(|g| format!("{g:.3e}")).unwrap_or_default(),
        ]
    };
    let six = |x: f64| format!("{x:.6}");
    table(w, format, &ROOTS_COLUMNS, rows.iter().map(|r| cells(r, full)), rows.iter().map(|r| cells(r, six)))
}

pub const SWEEP_COLUMNS: [&str; 6] = ["p", "replicas", "survived", "fraction", "ci_lo", "ci_hi"];

pub fn write_sweep(w: &mut dyn Write, format: Format, points: &[SweepPoint]) -> io::Result<()> {
    if format == Format::Json {
        return write_json(w, points);
    }
    let cells = |s: &SweepPoint, num: fn(f64) -> String| {
        vec![full(s.p), s.replicas.to_string(), s.survived.to_string(), num(s.fraction), num(s.ci_lo), num(s.ci_hi)]
    };
    table(w, format, &SWEEP_COLUMNS, points.iter().map(|s| cells(s, full)), points.iter().map(|s| cells(s, four)))
}

pub const CHECK_COLUMNS: [&str; 4] = ["suite", "invariant", "passed", "detail"];

pub fn write_checks(w: &mut dyn Write, format: Format, rows: &[CheckRow]) -> io::Result<()> {
    match format {
        Format::Json => write_json(w, rows),
        Format::Csv => write_csv(
            w,
            &CHECK_COLUMNS,
            rows.iter().map(|r| vec![r.suite.clone(), r.invariant.clone(), r.passed.to_string(), r.detail.clone()]),
        ),
        Format::Pretty => {
            for r in rows {
                writeln!(
                    w,
                    "[{}] {}: {} ({})",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.suite,
                    r.invariant,
                    r.detail
                )?;
            }
            Ok(())
        }
    }
}
