//! CSV and JSON artifact writers.
//!
//! Every CSV starts with two comment lines: the schema tag and a timestamp.
//! Everything after the timestamp line is a deterministic function of the data.
//! Floats use Rust's shortest round-trip formatting.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::pde2d::{Profile, Section};

pub const SCHEMA_VERSION: u32 = 1;

/// Seconds since the Unix epoch, as written in the timestamp line.
pub fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Write `# driftlab-schema: <version> <kind>` and `# generated-unix: <ts>`.
pub fn write_csv_header<W: Write>(w: &mut W, kind: &str, ts: u64) -> io::Result<()> {
    writeln!(w, "# driftlab-schema: {SCHEMA_VERSION} {kind}")?;
    writeln!(w, "# generated-unix: {ts}")
}

/// Numeric CSV table with a header comment block and a column row.
pub fn write_table<W: Write>(w: W, kind: &str, columns: &[&str], rows: &[Vec<f64>], ts: u64) -> io::Result<()> {
    let mut w = w;
    write_csv_header(&mut w, kind, ts)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns).map_err(io::Error::other)?;
    for row in rows {
        if row.len() != columns.len() {
            return Err(io::Error::new(io::ErrorKind::InvalidInput, "row width differs from column count"));
        }
        csv.write_record(row.iter().map(|v| v.to_string())).map_err(io::Error::other)?;
    }
    csv.flush()
}

/// Write a CSV of string-valued records (for rows with optional cells).
pub fn write_records<W: Write>(w: W, kind: &str, columns: &[&str], rows: &[Vec<String>], ts: u64) -> io::Result<()> {
    let mut w = w;
    write_csv_header(&mut w, kind, ts)?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(columns).map_err(io::Error::other)?;
    for row in rows {
        csv.write_record(row).map_err(io::Error::other)?;
    }
    csv.flush()
}

pub fn write_table_file(path: &Path, kind: &str, columns: &[&str], rows: &[Vec<f64>], ts: u64) -> io::Result<()> {
    write_table(BufWriter::new(File::create(path)?), kind, columns, rows, ts)
}

pub fn write_records_file(path: &Path, kind: &str, columns: &[&str], rows: &[Vec<String>], ts: u64) -> io::Result<()> {
    write_records(BufWriter::new(File::create(path)?), kind, columns, rows, ts)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    generated_unix: u64,
    data: &'a T,
}

/// Pretty JSON wrapped as `{schema_version, kind, generated_unix, data}`.
pub fn write_json<W: Write, T: Serialize>(w: W, kind: &str, data: &T, ts: u64) -> io::Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, &Envelope { schema_version: SCHEMA_VERSION, kind, generated_unix: ts, data })
        .map_err(io::Error::other)?;
    writeln!(w)
}

pub fn write_json_file<T: Serialize>(path: &Path, kind: &str, data: &T, ts: u64) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_json(&mut w, kind, data, ts)?;
    w.flush()
}

/// `(x1, x2, u)` rows over interior nodes.
pub fn profile_rows(profile: &Profile) -> Vec<Vec<f64>> {
    let g = &profile.grid;
    let mut rows = Vec::with_capacity(g.len());
    for j in 0..g.ny {
        for i in 0..g.nx {
            let (x, y) = g.xy(i, j);
            rows.push(vec![x, y, profile.values[g.idx(i, j)]]);
        }
    }
    rows
}

/// `(s, x1, x2, u)` rows along a section.
pub fn section_rows(section: &Section) -> Vec<Vec<f64>> {
    let len = section.s.last().copied().unwrap_or(0.0);
    section
        .s
        .iter()
        .zip(&section.values)
        .map(|(&s, &u)| {
            let t = if len > 0.0 { s / len } else { 0.0 };
            let x = section.from[0] + t * (section.to[0] - section.from[0]);
            let y = section.from[1] + t * (section.to[1] - section.from[1]);
            vec![s, x, y, u]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_deterministic_after_timestamp() {
        let rows = vec![vec![0.1, 1.0 / 3.0], vec![2.5e-300, -0.0]];
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_table(&mut a, "test", &["x", "y"], &rows, 1).unwrap();
        write_table(&mut b, "test", &["x", "y"], &rows, 2).unwrap();
        let (a, b) = (String::from_utf8(a).unwrap(), String::from_utf8(b).unwrap());
        let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# generated")).collect::<Vec<_>>().join("\n");
        assert_ne!(a, b);
        assert_eq!(strip(&a), strip(&b));
        assert!(a.starts_with("# driftlab-schema: 1 test\n"));
        let third = a.lines().nth(3).unwrap();
        let parsed: Vec<f64> = third.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(parsed[0], 0.1);
        assert_eq!(parsed[1], 1.0 / 3.0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let mut out = Vec::new();
        assert!(write_table(&mut out, "t", &["x", "y"], &[vec![1.0]], 0).is_err());
    }

    #[test]
    fn json_envelope() {
        let mut out = Vec::new();
        write_json(&mut out, "eigen", &serde_json::json!({"lambda": 2.4674011002723395}), 7).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["data"]["lambda"].as_f64().unwrap(), 2.4674011002723395);
    }
}
