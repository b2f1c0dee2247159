use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N` samples `(w_l, y_l)` stored as a row-major `N x d` feature matrix
/// and a target vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    n: usize,
    d: usize,
    features: Vec<f64>,
    targets: Vec<f64>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, d: usize, features: Vec<f64>, targets: Vec<f64>) -> Result<Self> {
        let n = targets.len();
        if n == 0 || d == 0 {
            return Err(Error::Data(format!("dataset must be nonempty (N={n}, d={d})")));
        }
        if features.len() != n * d {
            return Err(Error::Data(format!(
                "feature buffer has {} entries, expected N*d = {}",
                features.len(),
                n * d
            )));
        }
        if let Some(i) = features.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "non-finite feature at row {}, column {}",
                i / d,
                i % d
            )));
        }
        if let Some(i) = targets.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite target at row {i}")));
        }
        Ok(Self {
            name: name.into(),
            n,
            d,
            features,
            targets,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>], targets: Vec<f64>) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        if rows.len() != targets.len() {
            return Err(Error::Data(format!(
                "{} feature rows but {} targets",
                rows.len(),
                targets.len()
            )));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::Data(format!(
                "row {r} has {} columns, expected {d}",
                rows[r].len()
            )));
        }
        Self::new(name, d, rows.concat(), targets)
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.d..(i + 1) * self.d]
    }

    pub fn target(&self, i: usize) -> f64 {
        self.targets[i]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks_exact(self.d)
    }

    /// Per-column `(x - mean) / std`. Constant columns are only centered.
    pub fn standardize(&mut self) {
        let n = self.n as f64;
        for j in 0..self.d {
            let mean = self.rows().map(|r| r[j]).sum::<f64>() / n;
            let var = self.rows().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            let std = var.sqrt();
            for i in 0..self.n {
                let v = &mut self.features[i * self.d + j];
                *v -= mean;
                if std > 0.0 {
                    *v /= std;
                }
            }
        }
    }

    /// Replaces every target by `min(|y|, cap)`.
    pub fn fold_targets(&mut self, cap: f64) {
        for y in &mut self.targets {
            *y = y.abs().min(cap);
        }
    }

    pub fn is_binary(&self) -> bool {
        self.targets.iter().all(|&y| y == 1.0 || y == -1.0)
    }
}
