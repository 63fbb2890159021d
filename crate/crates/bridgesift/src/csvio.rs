//! CSV and JSON encodings of paths, replicate records and sweep summaries.
//!
//! Every CSV starts with a header row. Reals are written in scientific
//! notation with 17 significant digits, which round-trips any `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use bridgesift_core::{GridPath, PathSample, RateFit, ReplicateRecord, Scheme};
use serde::Serialize;

use crate::error::{CliError, Result};

/// Marker written in place of a slope that could not be fitted.
pub const ABSENT: &str = "absent";

pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn csv_err(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()
}

pub fn path_sample_csv<W: Write>(out: W, sample: &PathSample) -> std::io::Result<()> {
    let rows =
        sample.dx.iter().zip(&sample.dw).enumerate().map(|(i, (x, w))| vec![(i + 1).to_string(), real(*x), real(*w)]);
    write_rows(out, &["index", "dx", "dw"], rows)
}

pub fn grid_path_csv<W: Write>(out: W, path: &GridPath) -> std::io::Result<()> {
    let rows = path.values.iter().enumerate().map(|(i, v)| vec![i.to_string(), real(*v)]);
    write_rows(out, &["index", "value"], rows)
}

pub fn records_csv<W: Write>(out: W, records: &[ReplicateRecord]) -> std::io::Result<()> {
    let rows = records.iter().map(|r| {
        vec![
            r.scheme.to_string(),
            r.n.to_string(),
            r.replicate.to_string(),
            real(r.sup_error),
            r.argmax_index.to_string(),
        ]
    });
    write_rows(out, &["scheme", "n", "replicate", "sup_error", "argmax_index"], rows)
}

pub fn summary_csv<W: Write>(out: W, fits: &[RateFit]) -> std::io::Result<()> {
    let rows = fits.iter().flat_map(|fit| {
        let slope = fit.slope.map_or_else(|| ABSENT.to_string(), real);
        fit.per_n.iter().map(move |row| {
            vec![fit.scheme.to_string(), row.n.to_string(), real(row.median_error), real(row.q90_error), slope.clone()]
        })
    });
    write_rows(out, &["scheme", "n", "median", "q90", "slope"], rows)
}

#[derive(Serialize)]
struct PathSampleJson<'a> {
    n: usize,
    w1: f64,
    jump_count: u64,
    dx: &'a [f64],
    dw: &'a [f64],
}

#[derive(Serialize)]
struct GridPathJson<'a> {
    scheme: &'a str,
    values: &'a [f64],
}

#[derive(Serialize)]
struct RecordJson {
    scheme: &'static str,
    n: usize,
    replicate: usize,
    sup_error: f64,
    argmax_index: usize,
}

#[derive(Serialize)]
struct SummaryJson {
    scheme: &'static str,
    n: usize,
    median: f64,
    q90: f64,
    slope: Option<f64>,
}

fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()
}

pub fn path_sample_json<W: Write>(out: W, s: &PathSample) -> std::io::Result<()> {
    write_json(out, &PathSampleJson { n: s.n, w1: s.w1, jump_count: s.jump_count, dx: &s.dx, dw: &s.dw })
}

pub fn grid_path_json<W: Write>(out: W, scheme: Scheme, path: &GridPath) -> std::io::Result<()> {
    write_json(out, &GridPathJson { scheme: scheme.as_str(), values: &path.values })
}

pub fn records_json<W: Write>(out: W, records: &[ReplicateRecord]) -> std::io::Result<()> {
    let rows: Vec<RecordJson> = records
        .iter()
        .map(|r| RecordJson {
            scheme: r.scheme.as_str(),
            n: r.n,
            replicate: r.replicate,
            sup_error: r.sup_error,
            argmax_index: r.argmax_index,
        })
        .collect();
    write_json(out, &rows)
}

pub fn summary_json<W: Write>(out: W, fits: &[RateFit]) -> std::io::Result<()> {
    let rows: Vec<SummaryJson> = fits
        .iter()
        .flat_map(|fit| {
            fit.per_n.iter().map(move |row| SummaryJson {
                scheme: fit.scheme.as_str(),
                n: row.n,
                median: row.median_error,
                q90: row.q90_error,
                slope: fit.slope,
            })
        })
        .collect();
    write_json(out, &rows)
}

/// Create `path` and hand a buffered writer to `f`.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(path, e))
}

/// Read the increment column of a CSV file.
///
/// The column is `dx` when present; otherwise the file must have a single
/// column, or two columns the first of which is `index`.
pub fn read_increments(path: &Path) -> Result<Vec<f64>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let bad = |message: String| CliError::Format { path: path.to_path_buf(), message };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = match headers.iter().position(|h| h == "dx") {
        Some(c) => c,
        None if headers.len() == 1 => 0,
        None if headers.len() == 2 && &headers[0] == "index" => 1,
        None => {
            return Err(bad(format!(
                "cannot tell which column holds increments (header: {}); name it `dx`",
                headers.iter().collect::<Vec<_>>().join(",")
            )))
        }
    };
    let mut out = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let line = i + 2;
        let field = record.get(column).ok_or_else(|| bad(format!("line {line}: missing column {}", column + 1)))?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => return Err(bad(format!("line {line}: `{field}` is not a finite real"))),
        }
    }
    if out.is_empty() {
        return Err(bad("no increments".to_string()));
    }
    Ok(out)
}
