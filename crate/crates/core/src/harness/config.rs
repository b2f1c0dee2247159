use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{DatasetSpec, SMALL_BATCH};
use crate::error::{Error, Result};
use crate::problems::{LossKind, Problem};
use crate::stepsize::{PolicyConfig, PolicyKind, DEFAULT_DELTA, DEFAULT_LAMBDA0};

/// `10^i` for `i = -4, -3.5, ..., 2`.
pub fn default_grid() -> Vec<f64> {
    (0..13).map(|i| 10f64.powf(-4.0 + 0.5 * i as f64)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub loss: LossKind,
    pub dataset: DatasetSpec,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        Problem::new(self.dataset.load()?, self.loss)
    }
}

/// An algorithm entry: a bare policy name or a table overriding its knobs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgorithmTemplate {
    Name(PolicyKind),
    Full {
        kind: PolicyKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        delta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
}

impl From<PolicyKind> for AlgorithmTemplate {
    fn from(kind: PolicyKind) -> Self {
        AlgorithmTemplate::Name(kind)
    }
}

impl AlgorithmTemplate {
    pub fn kind(&self) -> PolicyKind {
        match self {
            AlgorithmTemplate::Name(k) => *k,
            AlgorithmTemplate::Full { kind, .. } => *kind,
        }
    }

    /// The policy at one grid value. MM rules use the grid value as `α`
    /// unless `alpha` is pinned.
    pub fn instantiate(&self, lambda0: f64, default_delta: f64) -> PolicyConfig {
        let mut cfg = PolicyConfig::new(self.kind(), lambda0).with_delta(default_delta);
        if let AlgorithmTemplate::Full { delta, alpha, .. } = self {
            if let Some(d) = delta {
                cfg.delta = *d;
            }
            cfg.alpha = *alpha;
        }
        cfg
    }
}

fn default_algorithms() -> Vec<AlgorithmTemplate> {
    PolicyKind::BENCHMARK
        .iter()
        .map(|&k| AlgorithmTemplate::Name(k))
        .collect()
}
fn default_epochs() -> f64 {
    100.0
}
fn default_batch() -> usize {
    SMALL_BATCH
}
fn default_replicates() -> u64 {
    1
}
fn default_delta() -> f64 {
    DEFAULT_DELTA
}

/// Settings of the tuned comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerfSpec {
    #[serde(default = "default_perf_replicates")]
    pub replicates: u64,
    /// Step used by the AdaSGD variants regardless of tuning.
    #[serde(default = "default_adasgd_lambda0")]
    pub adasgd_lambda0: f64,
}

fn default_perf_replicates() -> u64 {
    1
}
fn default_adasgd_lambda0() -> f64 {
    DEFAULT_LAMBDA0
}

impl Default for PerfSpec {
    fn default() -> Self {
        Self {
            replicates: default_perf_replicates(),
            adasgd_lambda0: default_adasgd_lambda0(),
        }
    }
}

/// A complete experiment description, loadable from TOML.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub seed: u64,
    pub problem: ProblemSpec,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<AlgorithmTemplate>,
    #[serde(default = "default_grid")]
    pub lambda0_grid: Vec<f64>,
    #[serde(default = "default_epochs")]
    pub epochs: f64,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub perf: PerfSpec,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, seed: u64, problem: ProblemSpec) -> Self {
        Self {
            name: name.into(),
            seed,
            problem,
            algorithms: default_algorithms(),
            lambda0_grid: default_grid(),
            epochs: default_epochs(),
            batch_size: default_batch(),
            replicates: default_replicates(),
            delta: default_delta(),
            perf: PerfSpec::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda0_grid.is_empty() {
            return Err(Error::Config("lambda0_grid is empty".into()));
        }
        if self.lambda0_grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::Config("grid values must be positive and finite".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("no algorithms listed".into()));
        }
        if self.replicates < 1 || self.perf.replicates < 1 {
            return Err(Error::Config("replicates must be at least 1".into()));
        }
        if !(self.epochs > 0.0) || self.batch_size < 1 {
            return Err(Error::Config("epochs and batch_size must be positive".into()));
        }
        for a in &self.algorithms {
            let cfg = a.instantiate(self.lambda0_grid[0], self.delta);
            if cfg.kind == PolicyKind::ConvexOracle {
                return Err(Error::Config(
                    "convex-oracle needs f* and is not a grid algorithm".into(),
                ));
            }
            cfg.validate()?;
        }
        self.problem.dataset.validate()
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn config_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn n_cells(&self) -> usize {
        self.algorithms.len() * self.lambda0_grid.len() * self.replicates as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "synthetic-linear"
seed = 42

[problem]
loss = "linear"

[problem.dataset]
kind = "synthetic-gaussian"
n = 200
d = 20
seed = 7
"#;

    #[test]
    fn defaults_fill_in() {
        let s = ExperimentSpec::from_toml_str(MINIMAL).unwrap();
        assert_eq!(s.lambda0_grid.len(), 13);
        assert!((s.lambda0_grid[0] - 1e-4).abs() < 1e-18);
        assert!((s.lambda0_grid[12] - 100.0).abs() < 1e-12);
        assert_eq!(s.n_cells(), 91);
        assert_eq!(s.epochs, 100.0);
        assert_eq!(s.batch_size, 32);
    }

    #[test]
    fn algorithm_tables_and_names_mix() {
        let text = MINIMAL.replace(
            "seed = 42\n",
            "seed = 42\nalgorithms = [\"sgd\", { kind = \"adasgd-iii\", delta = 0.1 }]\n",
        );
        let s = ExperimentSpec::from_toml_str(&text).unwrap();
        assert_eq!(s.algorithms.len(), 2);
        assert_eq!(s.algorithms[0].kind(), PolicyKind::SgdConst);
        assert_eq!(s.algorithms[1].instantiate(1.0, 0.01).delta, 0.1);
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentSpec::from_toml_str(MINIMAL).unwrap();
        let mut b = a.clone();
        assert_eq!(a.config_hash(), b.config_hash());
        b.seed += 1;
        assert_ne!(a.config_hash(), b.config_hash());
        assert_eq!(a.config_hash().len(), 64);
    }

    #[test]
    fn toml_round_trip() {
        let a = ExperimentSpec::from_toml_str(MINIMAL).unwrap();
        let b = ExperimentSpec::from_toml_str(&a.to_toml_string().unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExperimentSpec::from_toml_str(&MINIMAL.replace("seed = 42", "seed = 42\nlambda0_grid = []")).is_err());
        assert!(ExperimentSpec::from_toml_str(&MINIMAL.replace("seed = 42", "seed = 42\nbogus = 1")).is_err());
        assert!(
            ExperimentSpec::from_toml_str(&MINIMAL.replace("seed = 42", "seed = 42\nalgorithms = [\"adam\"]")).is_err()
        );
    }
}
