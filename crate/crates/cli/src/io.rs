//! Feature tables, label files and graph files.

use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{CliError, Result};

/// A numeric table read from a delimited file with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub values: Array2<f64>,
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::io(path, io),
            _ => unreachable!(),
        }
    } else {
        CliError::Validation(format!("{}: {e}", path.display()))
    }
}

/// Reads a comma-separated feature file. Row order defines node indices.
pub fn read_features(path: &Path) -> Result<FeatureTable> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let names: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if names.is_empty() {
        return Err(CliError::Validation(format!("{}: no feature columns", path.display())));
    }
    let mut flat = Vec::new();
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        for (field, name) in record.iter().zip(&names) {
            let v: f64 = field.parse().map_err(|_| {
                CliError::Validation(format!(
                    "{}: row {}, column {name}: not a number: {field:?}",
                    path.display(),
                    i + 1
                ))
            })?;
            if !v.is_finite() {
                return Err(CliError::Validation(format!(
                    "{}: row {}, column {name}: non-finite value",
                    path.display(),
                    i + 1
                )));
            }
            flat.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Validation(format!("{}: no data rows", path.display())));
    }
    let values = Array2::from_shape_vec((rows, names.len()), flat).expect("csv enforces equal row lengths");
    Ok(FeatureTable { names, values })
}

pub fn write_features(path: &Path, table: &FeatureTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(&table.names).map_err(|e| csv_error(path, e))?;
    for row in table.values.rows() {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Additive log-ratio transform against the column `reference`. Values below
/// `floor` are raised to it first; the reference column is dropped.
pub fn additive_log_ratio(table: &FeatureTable, reference: &str, floor: f64) -> Result<FeatureTable> {
    if !(floor > 0.0) {
        return Err(CliError::Validation(format!("ALR floor must be positive (got {floor})")));
    }
    let r = table
        .names
        .iter()
        .position(|n| n == reference)
        .ok_or_else(|| CliError::Validation(format!("ALR reference column {reference:?} not found")))?;
    if table.names.len() < 2 {
        return Err(CliError::Validation("ALR needs at least two columns".into()));
    }
    let keep: Vec<usize> = (0..table.names.len()).filter(|&j| j != r).collect();
    let (rows, _) = table.values.dim();
    let values = Array2::from_shape_fn((rows, keep.len()), |(i, j)| {
        let num = table.values[[i, keep[j]]].max(floor);
        let den = table.values[[i, r]].max(floor);
        (num / den).ln()
    });
    Ok(FeatureTable {
        names: keep.iter().map(|&j| format!("alr_{}", table.names[j])).collect(),
        values,
    })
}

/// Reads cluster labels from a delimited file with a header: the last column
/// holds the label, rows are in node order.
pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let field = record
            .iter()
            .last()
            .ok_or_else(|| CliError::Validation(format!("{}: empty row {}", path.display(), i + 1)))?;
        labels.push(field.parse().map_err(|_| {
            CliError::Validation(format!("{}: row {}: not a label: {field:?}", path.display(), i + 1))
        })?);
    }
    Ok(labels)
}

/// Writes the two-column `node,cluster` file.
pub fn write_labels(path: &Path, labels: &[usize]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["node", "cluster"]).map_err(|e| csv_error(path, e))?;
    for (node, c) in labels.iter().enumerate() {
        w.write_record([node.to_string(), c.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn alr_drops_reference() {
        let t = FeatureTable {
            names: vec!["a".into(), "b".into(), "c".into()],
            values: array![[0.2, 0.3, 0.5], [0.0, 0.5, 0.5]],
        };
        let out = additive_log_ratio(&t, "c", 1e-6).unwrap();
        assert_eq!(out.names, vec!["alr_a", "alr_b"]);
        assert!((out.values[[0, 0]] - (0.4f64).ln()).abs() < 1e-12);
        assert!((out.values[[1, 0]] - (2e-6f64).ln()).abs() < 1e-9);
        assert!(additive_log_ratio(&t, "zz", 1e-6).is_err());
    }
}
