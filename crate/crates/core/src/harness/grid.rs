use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::output::{Manifest, OutputDir};
use crate::harness::ExperimentSpec;
use crate::optimizer::{run, RunConfig, RunOutcome, RunStatus};
use crate::problems::{Objective, ReferenceSolution};
use crate::sampling::RngStream;
use crate::stepsize::{PolicyConfig, PolicyKind};

/// Mixed into the seed of the tuned comparison so its runs never reuse a
/// grid stream.
const PERF_SEED_SALT: u64 = 0x5045_5246_5F52_554E;

/// Stable numeric id of a policy, used for stream derivation.
pub fn algorithm_id(kind: PolicyKind) -> u64 {
    PolicyKind::ALL.iter().position(|&k| k == kind).expect("listed") as u64
}

/// Outcome of one (algorithm, λ₀, replicate) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub algorithm: PolicyKind,
    pub lambda0: f64,
    pub grid_index: usize,
    pub replicate: u64,
    pub stream_id: u64,
    /// `f` at the last iterate; absent after a failure.
    pub final_f: Option<f64>,
    /// Lowest epoch-boundary value seen.
    pub best_f: Option<f64>,
    pub status: RunStatus,
    pub iterations: u64,
    pub grad_evals: u64,
}

impl CellResult {
    pub fn id(&self) -> String {
        cell_id(self.algorithm, self.grid_index, self.replicate)
    }

    pub fn diverged(&self) -> bool {
        self.status.is_failure() || self.final_f.is_none()
    }
}

pub fn cell_id(kind: PolicyKind, grid_index: usize, replicate: u64) -> String {
    format!("{}__{:02}__{:03}", kind.name(), grid_index, replicate)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub name: String,
    pub config_hash: String,
    pub cells: Vec<CellResult>,
}

impl GridResult {
    pub fn cells_for(&self, kind: PolicyKind) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(move |c| c.algorithm == kind)
    }

    /// Mean and minimum final value per (algorithm, λ₀) over non-diverged
    /// replicates.
    pub fn aggregate(&self) -> Vec<(PolicyKind, f64, Option<f64>, Option<f64>)> {
        let mut groups: BTreeMap<(PolicyKind, usize), (f64, Vec<f64>)> = BTreeMap::new();
        for c in &self.cells {
            let e = groups
                .entry((c.algorithm, c.grid_index))
                .or_insert((c.lambda0, Vec::new()));
            if let (false, Some(f)) = (c.diverged(), c.final_f) {
                e.1.push(f);
            }
        }
        groups
            .into_iter()
            .map(|((kind, _), (l0, fs))| {
                let mean = (!fs.is_empty()).then(|| fs.iter().sum::<f64>() / fs.len() as f64);
                let min = fs.iter().copied().reduce(f64::min);
                (kind, l0, mean, min)
            })
            .collect()
    }
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t.max(1));
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn summarize(outcome: &RunOutcome) -> (Option<f64>, Option<f64>) {
    if outcome.status.is_failure() {
        return (None, None);
    }
    let best = outcome.value_curve().iter().map(|p| p.1).reduce(f64::min);
    (outcome.final_value, best)
}

/// Runs every (algorithm, λ₀, replicate) cell, writing the manifest and each
/// cell to `sink` when given. Failed cells are recorded
/// with their status; they never abort the grid. Results come back in a
/// fixed order, independent of scheduling.
pub fn run_sensitivity(
    spec: &ExperimentSpec,
    problem: &dyn Objective,
    threads: Option<usize>,
    sink: Option<&OutputDir>,
) -> Result<GridResult> {
    spec.validate()?;
    if let Some(out) = sink {
        out.write_manifest(&Manifest::for_spec(spec))?;
    }
    let mut jobs = Vec::with_capacity(spec.n_cells());
    for alg in &spec.algorithms {
        for (gi, &l0) in spec.lambda0_grid.iter().enumerate() {
            for rep in 0..spec.replicates {
                jobs.push((alg.clone(), gi, l0, rep));
            }
        }
    }
    let pool = thread_pool(threads)?;
    let cells: Vec<Result<CellResult>> = pool.install(|| {
        jobs.par_iter()
            .map(|(alg, gi, l0, rep)| {
                let policy = alg.instantiate(*l0, spec.delta);
                let stream = RngStream::for_cell(spec.seed, algorithm_id(policy.kind), *gi as u64, *rep);
                let id = cell_id(policy.kind, *gi, *rep);
                let cfg = RunConfig::new(policy.clone(), spec.epochs, spec.batch_size, stream).with_run_id(id.clone());
                let outcome = run(problem, cfg)?;
                let (final_f, best_f) = summarize(&outcome);
                let cell = CellResult {
                    algorithm: policy.kind,
                    lambda0: *l0,
                    grid_index: *gi,
                    replicate: *rep,
                    stream_id: stream.stream_id,
                    final_f,
                    best_f,
                    status: outcome.status.clone(),
                    iterations: outcome.state.k,
                    grad_evals: outcome.state.grad_evals,
                };
                if let Some(out) = sink {
                    out.write_records(&id, &outcome.records)?;
                    out.write_cell(&cell)?;
                }
                Ok(cell)
            })
            .collect()
    });
    Ok(GridResult {
        name: spec.name.clone(),
        config_hash: spec.config_hash(),
        cells: cells.into_iter().collect::<Result<_>>()?,
    })
}

/// The λ₀ with the lowest final full-batch value (mean over replicates);
/// ties go to the smaller λ₀.
pub fn select_best_lambda0(grid: &GridResult, kind: PolicyKind) -> Result<f64> {
    let mut best: Option<(f64, f64)> = None;
    let mut seen = false;
    for (k, l0, mean, _) in grid.aggregate() {
        if k != kind {
            continue;
        }
        seen = true;
        let Some(f) = mean else { continue };
        if best.is_none_or(|(bf, bl)| f < bf || (f == bf && l0 < bl)) {
            best = Some((f, l0));
        }
    }
    match best {
        Some((_, l0)) => Ok(l0),
        None if seen => Err(Error::Selection(format!("every {kind} cell diverged"))),
        None => Err(Error::Selection(format!("{kind} is not in the grid"))),
    }
}

/// One run of the tuned comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfRun {
    pub algorithm: PolicyKind,
    pub lambda0: f64,
    pub replicate: u64,
    pub status: RunStatus,
    /// `(epoch, f - f*)`, or raw `f` without a reference.
    pub curve: Vec<(f64, f64)>,
}

impl PerfRun {
    pub fn final_value(&self) -> Option<f64> {
        (!self.status.is_failure())
            .then(|| self.curve.last().map(|p| p.1))
            .flatten()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfResult {
    pub name: String,
    pub config_hash: String,
    pub f_star: Option<f64>,
    /// Set when no reference was available and curves hold raw `f`.
    pub raw_values: bool,
    pub runs: Vec<PerfRun>,
}

/// A point of an averaged curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub algorithm: PolicyKind,
    pub epoch: f64,
    pub suboptimality: f64,
}

impl PerfResult {
    /// Per-algorithm mean over non-failed replicates at each epoch.
    pub fn curves(&self) -> Vec<CurvePoint> {
        let mut acc: BTreeMap<(PolicyKind, u64), (f64, f64, usize)> = BTreeMap::new();
        for r in self.runs.iter().filter(|r| !r.status.is_failure()) {
            for &(epoch, v) in &r.curve {
                let e = acc.entry((r.algorithm, epoch.to_bits())).or_insert((epoch, 0.0, 0));
                e.1 += v;
                e.2 += 1;
            }
        }
        // non-negative epochs order the same as their bit patterns
        acc.into_iter()
            .map(|((algorithm, _), (epoch, sum, n))| CurvePoint {
                algorithm,
                epoch,
                suboptimality: sum / n as f64,
            })
            .collect()
    }

    /// Median final value over replicates, failures counted as `+∞`.
    pub fn median_final(&self, kind: PolicyKind) -> Option<f64> {
        let mut v: Vec<f64> = self
            .runs
            .iter()
            .filter(|r| r.algorithm == kind)
            .map(|r| r.final_value().unwrap_or(f64::INFINITY))
            .collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        Some(if v.len() % 2 == 1 {
            v[m]
        } else {
            0.5 * (v[m - 1] + v[m])
        })
    }
}

/// Tuned comparison on fresh streams. AdaSGD variants always use
/// `spec.perf.adasgd_lambda0`; the others use their entry in `tuned`.
pub fn run_performance(
    spec: &ExperimentSpec,
    problem: &dyn Objective,
    tuned: &BTreeMap<PolicyKind, f64>,
    reference: Option<&ReferenceSolution>,
    threads: Option<usize>,
) -> Result<PerfResult> {
    spec.validate()?;
    let mut jobs: Vec<(PolicyConfig, u64)> = Vec::new();
    for alg in &spec.algorithms {
        let kind = alg.kind();
        let l0 = if kind.is_adasgd() {
            spec.perf.adasgd_lambda0
        } else {
            *tuned
                .get(&kind)
                .ok_or_else(|| Error::Selection(format!("no tuned step for {kind}")))?
        };
        for rep in 0..spec.perf.replicates {
            jobs.push((alg.instantiate(l0, spec.delta), rep));
        }
    }
    let f_star = reference.map(|r| r.f_star);
    let pool = thread_pool(threads)?;
    let runs: Vec<Result<PerfRun>> =
        pool.install(|| {
            jobs.par_iter()
                .map(|(policy, rep)| {
                    let stream = RngStream::for_cell(spec.seed ^ PERF_SEED_SALT, algorithm_id(policy.kind), 0, *rep);
                    let cfg = RunConfig::new(policy.clone(), spec.epochs, spec.batch_size, stream)
                        .with_run_id(format!("perf__{}__{:03}", policy.kind.name(), rep));
                    let outcome = run(problem, cfg)?;
                    let shift = f_star.unwrap_or(0.0);
                    Ok(PerfRun {
                        algorithm: policy.kind,
                        lambda0: policy.lambda0,
                        replicate: *rep,
                        status: outcome.status.clone(),
                        curve: outcome.value_curve().into_iter().map(|(e, f)| (e, f - shift)).collect(),
                    })
                })
                .collect()
        });
    Ok(PerfResult {
        name: spec.name.clone(),
        config_hash: spec.config_hash(),
        f_star,
        raw_values: reference.is_none(),
        runs: runs.into_iter().collect::<Result<_>>()?,
    })
}
