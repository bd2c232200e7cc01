//! CSV readers.
//!
//! Numeric files have one row per object. A first row that does not parse as
//! numbers is taken as a header and skipped. Blank lines are ignored.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use relclust::{Dataset, FlatPartition, LinkageRecord};

use crate::error::{CliError, Result};

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn csv_error(name: &str, e: csv::Error) -> CliError {
    let line = e.position().map_or(0, |p| p.line());
    CliError::parse(name, line, e.to_string())
}

/// Parses a rectangular numeric table. Returns the rows flattened plus the
/// column count.
fn parse_matrix<R: Read>(input: R, name: &str) -> Result<(Vec<f64>, usize, usize)> {
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (idx, record) in reader(input).records().enumerate() {
        let record = record.map_err(|e| csv_error(name, e))?;
        let line = line_of(&record);
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let row = match parsed {
            Ok(row) => row,
            Err(_) if idx == 0 => continue,
            Err(_) => {
                let bad = record.iter().find(|c| c.parse::<f64>().is_err()).unwrap_or("");
                return Err(CliError::parse(name, line, format!("non-numeric cell `{bad}`")));
            }
        };
        if let Some(bad) = row.iter().find(|x| !x.is_finite()) {
            return Err(CliError::parse(name, line, format!("non-finite value `{bad}`")));
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(CliError::parse(
                    name,
                    line,
                    format!("expected {w} columns, found {}", row.len()),
                ))
            }
            Some(_) => {}
        }
        values.extend(row);
        rows += 1;
    }
    match width {
        Some(w) => Ok((values, rows, w)),
        None => Err(CliError::parse(name, 1, "no numeric rows")),
    }
}

pub fn parse_points_csv<R: Read>(input: R, name: &str) -> Result<Dataset> {
    let (values, n, d) = parse_matrix(input, name)?;
    Ok(Dataset::from_points(n, d, values)?)
}

/// One row per object; rows become object indices in file order.
pub fn load_points_csv(path: &Path) -> Result<Dataset> {
    parse_points_csv(open(path)?, &path.display().to_string())
}

pub fn parse_dissimilarity_csv<R: Read>(input: R, name: &str) -> Result<Dataset> {
    let (values, n, w) = parse_matrix(input, name)?;
    if n != w {
        return Err(CliError::InvalidInput(format!(
            "{name}: dissimilarity matrix must be square, got {n} rows and {w} columns"
        )));
    }
    Ok(Dataset::from_dissimilarities(n, values)?)
}

/// Full `n x n` symmetric matrix.
pub fn load_dissimilarity_csv(path: &Path) -> Result<Dataset> {
    parse_dissimilarity_csv(open(path)?, &path.display().to_string())
}

pub fn parse_labels_csv<R: Read>(input: R, name: &str) -> Result<FlatPartition> {
    let mut raw = Vec::new();
    for record in reader(input).records() {
        let record = record.map_err(|e| csv_error(name, e))?;
        if record.len() != 1 {
            return Err(CliError::parse(
                name,
                line_of(&record),
                format!("expected one label per line, found {} fields", record.len()),
            ));
        }
        raw.push(record[0].to_owned());
    }
    if raw.is_empty() {
        return Err(CliError::parse(name, 1, "no labels"));
    }
    Ok(FlatPartition::from_raw(&raw))
}

/// One label per line, no header. Any strings work; they are numbered in
/// order of first appearance.
pub fn load_labels_csv(path: &Path) -> Result<FlatPartition> {
    parse_labels_csv(open(path)?, &path.display().to_string())
}

/// Reads a linkage table as written by [`crate::output::linkage_csv`].
pub fn parse_linkage_csv<R: Read>(input: R, name: &str) -> Result<Vec<LinkageRecord>> {
    let mut records = Vec::new();
    for (idx, record) in reader(input).records().enumerate() {
        let record = record.map_err(|e| csv_error(name, e))?;
        let line = line_of(&record);
        if idx == 0 && record.get(0) == Some("rep_a") {
            continue;
        }
        if record.len() != 5 {
            return Err(CliError::parse(name, line, format!("expected 5 fields, found {}", record.len())));
        }
        let int = |i: usize| {
            record[i]
                .parse::<usize>()
                .map_err(|_| CliError::parse(name, line, format!("bad integer `{}`", &record[i])))
        };
        let distance = record[2]
            .parse::<f64>()
            .map_err(|_| CliError::parse(name, line, format!("bad distance `{}`", &record[2])))?;
        records.push(LinkageRecord {
            a: int(0)?,
            b: int(1)?,
            distance,
            level: int(3)?,
            order: int(4)?,
        });
    }
    Ok(records)
}
