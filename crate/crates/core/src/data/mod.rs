//! Dataset construction: generated Gaussian and two-moons data, LIBSVM
//! files and numeric CSV files.

mod libsvm;
mod synthetic;
mod tabular;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Dataset;

pub use libsvm::{parse_libsvm, write_libsvm};
pub use synthetic::{gen_synthetic_gaussian, gen_two_moons};
pub use tabular::parse_csv;

/// Default minibatch size for the small problems.
pub const SMALL_BATCH: usize = 32;
/// Default minibatch size for w8a.
pub const W8A_BATCH: usize = 309;
pub const W8A_DIM: usize = 300;
pub const DEFAULT_MOONS_NOISE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    SyntheticGaussian,
    TwoMoons,
    LibsvmFile,
    CsvFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub kind: DatasetKind,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub noise: Option<f64>,
    /// CSV target column, zero-based. Defaults to the last column.
    #[serde(default)]
    pub target_column: Option<usize>,
    #[serde(default)]
    pub standardize: bool,
    /// Replace each target by `min(|y|, cap)`.
    #[serde(default)]
    pub fold_targets: Option<f64>,
}

impl DatasetSpec {
    fn bare(kind: DatasetKind) -> Self {
        Self {
            kind,
            n: None,
            d: None,
            seed: None,
            path: None,
            noise: None,
            target_column: None,
            standardize: false,
            fold_targets: None,
        }
    }

    pub fn synthetic(n: usize, d: usize, seed: u64) -> Self {
        Self {
            n: Some(n),
            d: Some(d),
            seed: Some(seed),
            ..Self::bare(DatasetKind::SyntheticGaussian)
        }
    }

    pub fn two_moons(n: usize, noise: f64, seed: u64) -> Self {
        Self {
            n: Some(n),
            seed: Some(seed),
            noise: Some(noise),
            ..Self::bare(DatasetKind::TwoMoons)
        }
    }

    pub fn libsvm(path: impl Into<PathBuf>, d: Option<usize>) -> Self {
        Self {
            path: Some(path.into()),
            d,
            ..Self::bare(DatasetKind::LibsvmFile)
        }
    }

    pub fn csv(path: impl Into<PathBuf>, target_column: Option<usize>) -> Self {
        Self {
            path: Some(path.into()),
            target_column,
            ..Self::bare(DatasetKind::CsvFile)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let generated = matches!(self.kind, DatasetKind::SyntheticGaussian | DatasetKind::TwoMoons);
        if generated && self.seed.is_none() {
            return Err(Error::Config(format!("{:?} data needs a seed", self.kind)));
        }
        if !generated && self.path.is_none() {
            return Err(Error::Config(format!("{:?} data needs a path", self.kind)));
        }
        if self.kind == DatasetKind::SyntheticGaussian && (self.n.is_none() || self.d.is_none()) {
            return Err(Error::Config("synthetic data needs n and d".into()));
        }
        if self.kind == DatasetKind::TwoMoons && self.n.is_none() {
            return Err(Error::Config("two-moons data needs n".into()));
        }
        Ok(())
    }

    pub fn load(&self) -> Result<Dataset> {
        self.validate()?;
        let mut ds = match self.kind {
            DatasetKind::SyntheticGaussian => {
                gen_synthetic_gaussian(self.seed.unwrap(), self.n.unwrap(), self.d.unwrap())?
            }
            DatasetKind::TwoMoons => gen_two_moons(
                self.seed.unwrap(),
                self.n.unwrap(),
                self.noise.unwrap_or(DEFAULT_MOONS_NOISE),
            )?,
            DatasetKind::LibsvmFile => parse_libsvm(self.path.as_ref().unwrap(), self.d)?,
            DatasetKind::CsvFile => {
                let path = self.path.as_ref().unwrap();
                let col = match self.target_column {
                    Some(c) => c,
                    None => last_column(path)?,
                };
                parse_csv(path, col)?
            }
        };
        if self.standardize {
            ds.standardize();
        }
        if let Some(cap) = self.fold_targets {
            ds.fold_targets(cap);
        }
        Ok(ds)
    }
}

fn last_column(path: &std::path::Path) -> Result<usize> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::CsvParse {
            path: path.to_path_buf(),
            row: 0,
            column: 0,
            message: e.to_string(),
        })?;
    match reader.records().next() {
        Some(Ok(r)) if !r.is_empty() => Ok(r.len() - 1),
        _ => Err(Error::CsvParse {
            path: path.to_path_buf(),
            row: 1,
            column: 0,
            message: "empty file".into(),
        }),
    }
}
