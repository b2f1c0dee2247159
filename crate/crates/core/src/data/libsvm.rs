use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::problems::Dataset;

/// Reads a LIBSVM text file into a dense dataset with labels in {-1, +1}.
///
/// `dim` overrides the dimension inferred from the largest index; indices
/// beyond it are an error.
pub fn parse_libsvm(path: &Path, dim: Option<usize>) -> Result<Dataset> {
    let text = fs::read_to_string(path)?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut sparse: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut targets = Vec::new();
    let mut max_index = 0usize;
    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label = tokens.next().expect("nonempty line");
        targets.push(map_label(label).ok_or_else(|| err(lineno, format!("unrecognized label '{label}'")))?);

        let mut row = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok
                .split_once(':')
                .ok_or_else(|| err(lineno, format!("malformed token '{tok}'")))?;
            let idx: usize = idx.parse().map_err(|_| err(lineno, format!("bad index in '{tok}'")))?;
            let val: f64 = val.parse().map_err(|_| err(lineno, format!("bad value in '{tok}'")))?;
            if idx < 1 {
                return Err(err(lineno, "indices are 1-based".into()));
            }
            if idx <= last {
                return Err(err(lineno, format!("index {idx} does not increase")));
            }
            if let Some(d) = dim {
                if idx > d {
                    return Err(err(lineno, format!("index {idx} exceeds dimension {d}")));
                }
            }
            last = idx;
            row.push((idx - 1, val));
        }
        max_index = max_index.max(last);
        sparse.push(row);
    }
    if sparse.is_empty() {
        return Err(err(0, "no samples".into()));
    }

    let d = dim.unwrap_or(max_index).max(1);
    let mut features = vec![0.0; sparse.len() * d];
    for (i, row) in sparse.iter().enumerate() {
        for &(j, v) in row {
            features[i * d + j] = v;
        }
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "libsvm".into());
    Dataset::new(name, d, features, targets)
}

fn map_label(s: &str) -> Option<f64> {
    let v = s.parse::<f64>().ok()?;
    if v == 1.0 {
        Some(1.0)
    } else if v == -1.0 || v == 0.0 {
        Some(-1.0)
    } else {
        None
    }
}

/// Writes nonzero entries with shortest round-trip formatting.
pub fn write_libsvm(ds: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    for (row, &y) in ds.rows().zip(ds.targets()) {
        write!(out, "{}", if y > 0.0 { "+1" } else { "-1" }).unwrap();
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 {
                write!(out, " {}:{}", j + 1, v).unwrap();
            }
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}
