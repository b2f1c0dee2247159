use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::Dataset;

/// Reads a rectangular numeric CSV. The first row is treated as a header
/// when any of its cells fails to parse as a number.
pub fn parse_csv(path: &Path, target_column: usize) -> Result<Dataset> {
    let err = |row: usize, column: usize, message: String| Error::CsvParse {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(::csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(0, 0, e.to_string()))?;

    let mut features = Vec::new();
    let mut targets = Vec::new();
    let mut width = None;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| err(row, 0, e.to_string()))?;
        let parsed: Vec<Option<f64>> = record.iter().map(|c| c.parse().ok()).collect();
        if i == 0 && parsed.iter().any(Option::is_none) {
            width = Some(record.len());
            continue;
        }
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(err(
                row,
                record.len().min(w) + 1,
                format!("expected {w} columns, found {}", record.len()),
            ));
        }
        if target_column >= w {
            return Err(Error::Config(format!(
                "target column {target_column} out of range for {w} columns"
            )));
        }
        for (j, (cell, v)) in record.iter().zip(parsed).enumerate() {
            let v = v.ok_or_else(|| err(row, j + 1, format!("non-numeric cell '{cell}'")))?;
            if j == target_column {
                targets.push(v);
            } else {
                features.push(v);
            }
        }
    }
    let w = width.unwrap_or(0);
    if targets.is_empty() {
        return Err(err(0, 0, "no data rows".into()));
    }
    if w < 2 {
        return Err(err(1, 1, "need at least one feature column besides the target".into()));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Dataset::new(name, w - 1, features, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_str(text: &str, target: usize) -> Result<Dataset> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("data.csv");
        std::fs::write(&p, text).unwrap();
        parse_csv(&p, target)
    }

    #[test]
    fn target_column_is_split_off() {
        let ds = parse_str("1,2,3\n4,5,6", 2).unwrap();
        assert_eq!(ds.features(), &[1.0, 2.0, 4.0, 5.0]);
        assert_eq!(ds.targets(), &[3.0, 6.0]);
        let mid = parse_str("1,2,3\n4,5,6\n", 1).unwrap();
        assert_eq!(mid.features(), &[1.0, 3.0, 4.0, 6.0]);
    }

    #[test]
    fn header_and_crlf() {
        let ds = parse_str("a,b,y\r\n1,2,3\r\n4,5,6\r\n", 2).unwrap();
        assert_eq!(ds.n_samples(), 2);
        assert_eq!(ds.targets(), &[3.0, 6.0]);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_str("", 0), Err(Error::CsvParse { .. })));
        match parse_str("1,2,3\n4,5\n", 2) {
            Err(Error::CsvParse { row, .. }) => assert_eq!(row, 2),
            other => panic!("{other:?}"),
        }
        match parse_str("1,2,3\n4,x,6\n", 2) {
            Err(Error::CsvParse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("{other:?}"),
        }
    }
}
