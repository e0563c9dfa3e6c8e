//! CSV and JSON formats of the command-line tool.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), JSON objects
//! with sorted keys.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::SampleSet;

/// Fixed-width scientific float formatting with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_two_columns<R: Read>(reader: R, header: [&str; 2]) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(Error::InvalidSample(format!(
            "expected header `{}`, found `{}`",
            header.join(","),
            found.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::InvalidSample(format!("row {}: expected 2 fields", line + 1)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidSample(format!("row {}: `{s}` is not a number", line + 1)))
        };
        rows.push((parse(&record[0])?, parse(&record[1])?));
    }
    Ok(rows)
}

/// Reads a sample with header `x,y`.
pub fn read_sample<R: Read>(reader: R) -> Result<SampleSet> {
    SampleSet::new(parse_two_columns(reader, ["x", "y"])?)
}

pub fn read_sample_file(path: &Path) -> Result<SampleSet> {
    read_sample(File::open(path)?)
}

pub fn write_sample<W: Write>(writer: W, s: &SampleSet) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["x", "y"])?;
    for &(x, y) in s.pairs() {
        wtr.write_record([fmt_f64(x), fmt_f64(y)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads Pickands knots with header `x,a`.
pub fn read_knots<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    parse_two_columns(reader, ["x", "a"])
}

pub fn read_knots_file(path: &Path) -> Result<Vec<(f64, f64)>> {
    read_knots(File::open(path)?)
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, contents: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => std::io::stdout().write_all(contents)?,
    }
    Ok(())
}
