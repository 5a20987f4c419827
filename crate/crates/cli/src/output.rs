//! Table rows and JSON/CSV writers. Floats are written in their shortest
//! round-trip form; non-finite values become `null` in JSON.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One Chambers coefficient `a(order)` with `order = 2j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffRow {
    pub p: u64,
    pub q: u64,
    pub lambda: f64,
    pub order: u64,
    pub a: f64,
}

/// One trace value. The key set is stable across releases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub p: u64,
    pub q: u64,
    pub lambda: f64,
    pub kind: String,
    pub n: u32,
    pub s: Option<f64>,
    pub value: f64,
    pub method: String,
}

/// A density sample (`record = "density"`, `x = s`) or a reference moment
/// (`record = "moment"`, `x = 2k`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosRow {
    pub record: String,
    pub x: f64,
    pub value: f64,
}

/// One generating-function coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub p: u64,
    pub q: u64,
    pub lambda: f64,
    pub kind: String,
    pub s: Option<f64>,
    pub n: u32,
    pub value: f64,
}

/// Outcome of one verification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(input: impl io::Read) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|row| row.map_err(Into::into)).collect()
}

/// Writes `document` as JSON or `rows` as CSV to `path`, or stdout.
pub fn emit<D: Serialize, T: Serialize>(
    format: Format,
    path: Option<&Path>,
    document: &D,
    rows: &[T],
) -> Result<()> {
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(io::BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, document)?;
            writeln!(sink)?;
        }
        Format::Csv => write_csv(rows, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T>(rows: Vec<T>)
    where
        T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug,
    {
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let back: Vec<T> = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn trace_rows_round_trip() {
        round_trip(vec![
            TraceRow {
                p: 1,
                q: 3,
                lambda: 2.0,
                kind: "full".into(),
                n: 4,
                s: None,
                value: 24.0,
                method: "partition-sum".into(),
            },
            TraceRow {
                p: 2,
                q: 7,
                lambda: 0.1 + 0.2,
                kind: "pm-s".into(),
                n: 6,
                s: Some(-2.5e-7),
                value: 1.0 / 3.0,
                method: "partition-sum".into(),
            },
        ]);
    }

    #[test]
    fn other_rows_round_trip() {
        round_trip(vec![CoeffRow {
            p: 1,
            q: 4,
            lambda: 2.0,
            order: 4,
            a: -4.0,
        }]);
        round_trip(vec![
            DosRow {
                record: "density".into(),
                x: 0.0,
                value: f64::INFINITY,
            },
            DosRow {
                record: "moment".into(),
                x: 2.0,
                value: 4.000000000000001,
            },
        ]);
        round_trip(vec![SeriesRow {
            p: 0,
            q: 1,
            lambda: 1.5,
            kind: "mid-band".into(),
            s: None,
            n: 0,
            value: std::f64::consts::PI,
        }]);
        round_trip(vec![CheckRow {
            name: "walk".into(),
            passed: false,
            cases: 3,
            max_deviation: 1.25e-300,
            tolerance: 1e-8,
        }]);
    }
}
