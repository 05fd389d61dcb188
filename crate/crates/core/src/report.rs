//! CSV tables of experiment results.
//!
//! Floats are written in shortest round-trip form (scientific notation below
//! 1e-5 and from 1e16 upward); a missing value
//! (posterior variance of least squares, empirical variance of a single
//! repetition) is an empty field.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::experiment::{ExperimentKind, RepRecord};
use crate::metrics::AggregateRow;
use crate::qubit::BlochVector;

pub const AGGREGATE_HEADER: [&str; 16] = [
    "kind",
    "method",
    "n",
    "s_true_1",
    "s_true_2",
    "s_true_3",
    "length",
    "reps",
    "phi",
    "chi",
    "postvar_1",
    "postvar_2",
    "postvar_3",
    "empvar_1",
    "empvar_2",
    "empvar_3",
];

pub const REPETITION_HEADER: [&str; 8] = [
    "method", "n", "rep", "est_1", "est_2", "est_3", "fidelity", "hs",
];

/// One line of the per-repetition table. Metrics are absent when the true
/// state is unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepetitionRow {
    pub method: Method,
    pub n: u64,
    pub rep: u32,
    pub estimate: BlochVector,
    pub fidelity: Option<f64>,
    pub hs: Option<f64>,
}

impl From<&RepRecord> for RepetitionRow {
    fn from(r: &RepRecord) -> Self {
        RepetitionRow {
            method: r.result.method,
            n: r.n,
            rep: r.result.rep,
            estimate: r.result.estimate,
            fidelity: Some(r.result.fidelity),
            hs: Some(r.result.hs_distance),
        }
    }
}

fn float(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn triple(v: Option<[f64; 3]>) -> [String; 3] {
    match v {
        Some(v) => v.map(float),
        None => Default::default(),
    }
}

pub fn write_aggregate<W: Write>(rows: &[AggregateRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(AGGREGATE_HEADER)?;
    for row in rows {
        let [p1, p2, p3] = triple(row.postvar);
        let [e1, e2, e3] = triple(row.empvar);
        let [t1, t2, t3] = row.truth.0.map(float);
        w.write_record([
            row.kind.tag().to_string(),
            row.method.tag().to_string(),
            row.n.to_string(),
            t1,
            t2,
            t3,
            float(row.length),
            row.reps.to_string(),
            float(row.phi),
            float(row.chi),
            p1,
            p2,
            p3,
            e1,
            e2,
            e3,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the aggregate table to `path`, replacing any existing file.
pub fn emit_csv(rows: &[AggregateRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Empty("emit_csv"));
    }
    let file = BufWriter::new(File::create(path)?);
    write_aggregate(rows, file)
}

pub fn write_repetitions<W: Write>(rows: &[RepetitionRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(REPETITION_HEADER)?;
    for row in rows {
        let [e1, e2, e3] = row.estimate.0.map(float);
        w.write_record([
            row.method.tag().to_string(),
            row.n.to_string(),
            row.rep.to_string(),
            e1,
            e2,
            e3,
            row.fidelity.map(float).unwrap_or_default(),
            row.hs.map(float).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

struct Fields<'a> {
    record: &'a csv::StringRecord,
    line: usize,
}

impl Fields<'_> {
    fn err(&self, msg: String) -> Error {
        Error::Parse {
            line: self.line,
            msg,
        }
    }

    fn text(&self, i: usize) -> &str {
        self.record.get(i).unwrap_or("")
    }

    fn parse<T: FromStr>(&self, i: usize, name: &str) -> Result<T> {
        self.text(i)
            .parse()
            .map_err(|_| self.err(format!("bad {name} value {:?}", self.text(i))))
    }

    fn float(&self, i: usize, name: &str) -> Result<f64> {
        let x: f64 = self.parse(i, name)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.err(format!("{name} value {x} is not finite")))
        }
    }

    fn optional(&self, i: usize, name: &str) -> Result<Option<f64>> {
        if self.text(i).is_empty() {
            Ok(None)
        } else {
            self.float(i, name).map(Some)
        }
    }

    fn optional_triple(&self, start: usize, name: &str) -> Result<Option<[f64; 3]>> {
        let vals = [
            self.optional(start, name)?,
            self.optional(start + 1, name)?,
            self.optional(start + 2, name)?,
        ];
        match vals {
            [Some(a), Some(b), Some(c)] => Ok(Some([a, b, c])),
            [None, None, None] => Ok(None),
            _ => Err(self.err(format!("{name} columns must be all present or all empty"))),
        }
    }
}

fn reader<R: Read>(input: R, header: &[&str]) -> Result<csv::Reader<R>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let found = r.headers()?.clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("unexpected header {:?}", found.iter().collect::<Vec<_>>()),
        });
    }
    Ok(r)
}

/// Parses a table written by [`write_aggregate`].
pub fn read_aggregate<R: Read>(input: R) -> Result<Vec<AggregateRow>> {
    let mut r = reader(input, &AGGREGATE_HEADER)?;
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let f = Fields {
            record: &record,
            line: i + 2,
        };
        let reps: u32 = f.parse(7, "reps")?;
        if reps == 0 {
            return Err(f.err("reps must be at least 1".into()));
        }
        rows.push(AggregateRow {
            kind: ExperimentKind::from_str(f.text(0)).map_err(|e| f.err(e.to_string()))?,
            method: Method::from_str(f.text(1)).map_err(|e| f.err(e.to_string()))?,
            n: f.parse(2, "n")?,
            truth: BlochVector([
                f.float(3, "s_true")?,
                f.float(4, "s_true")?,
                f.float(5, "s_true")?,
            ]),
            length: f.float(6, "length")?,
            reps,
            phi: f.float(8, "phi")?,
            chi: f.float(9, "chi")?,
            postvar: f.optional_triple(10, "postvar")?,
            empvar: f.optional_triple(13, "empvar")?,
        });
    }
    Ok(rows)
}

/// Parses a table written by [`write_repetitions`].
pub fn read_repetitions<R: Read>(input: R) -> Result<Vec<RepetitionRow>> {
    let mut r = reader(input, &REPETITION_HEADER)?;
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let f = Fields {
            record: &record,
            line: i + 2,
        };
        rows.push(RepetitionRow {
            method: Method::from_str(f.text(0)).map_err(|e| f.err(e.to_string()))?,
            n: f.parse(1, "n")?,
            rep: f.parse(2, "rep")?,
            estimate: BlochVector([f.float(3, "est")?, f.float(4, "est")?, f.float(5, "est")?]),
            fidelity: f.optional(6, "fidelity")?,
            hs: f.optional(7, "hs")?,
        });
    }
    Ok(rows)
}
