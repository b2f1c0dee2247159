use std::path::PathBuf;

use thiserror::Error;

use crate::problems::ReferenceSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: row {row}, column {column}: {message}")]
    CsvParse {
        path: PathBuf,
        row: usize,
        column: usize,
        message: String,
    },

    /// The loss is undefined at the current point for this sample.
    #[error("loss undefined at sample {sample}: {message}")]
    Domain { sample: usize, message: String },

    #[error("step-size protocol violated: {0}")]
    Protocol(String),

    /// Same point, same batch, different gradients.
    #[error("inconsistent gradient oracle: zero displacement with nonzero gradient change")]
    InconsistentOracle,

    #[error("f(x_k) = {f_curr} lies below the supplied optimal value {f_star}")]
    InconsistentOptimum { f_curr: f64, f_star: f64 },

    #[error("averaging weight w_{k} = {weight} is negative")]
    NegativeWeight { k: usize, weight: f64 },

    #[error("reference solver stopped after {iterations} iterations with gradient norm {}", best.grad_norm_at_xstar)]
    ReferenceFailure {
        iterations: u64,
        best: Box<ReferenceSolution>,
    },

    #[error("cannot select a step size: {0}")]
    Selection(String),

    #[error("report failed: {0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
