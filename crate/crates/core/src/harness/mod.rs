//! Experiment orchestration: sensitivity grids over λ₀, tuned comparisons,
//! result files and the verification suite.

mod config;
pub mod fixtures;
mod grid;
mod output;
pub mod verify;

pub use config::{default_grid, AlgorithmTemplate, ExperimentSpec, PerfSpec, ProblemSpec};
pub use grid::{
    algorithm_id, cell_id, run_performance, run_sensitivity, select_best_lambda0, CellResult, CurvePoint, GridResult,
    PerfResult, PerfRun,
};
pub use output::{
    load_grid, output_root, report, write_atomic, Format, Manifest, OutputDir, ReportSummary, OUTPUT_ROOT_ENV,
};
