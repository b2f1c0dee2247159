//! The adaptive SGD main loop, generalized over step policies, and the
//! Jensen-averaged iterate.
//!
//! Iteration `k` draws `ξ_k`, fixes `λ_k`, evaluates `∇f_{ξ_k}(x_k)` and sets
//! `x_{k+1} = x_k - λ_k ∇f_{ξ_k}(x_k)`. For the previous-batch policies
//! `λ_k` only sees `(x_k, x_{k-1}, ξ_{k-1}, λ_{k-1}, λ_{k-2})`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, LyapunovSnapshot, StepCheck};
use crate::error::{Error, Result};
use crate::problems::{Objective, ReferenceSolution};
use crate::sampling::{sample_minibatch, MinibatchIndex, RngStream};
use crate::stepsize::{self, PolicyConfig, PolicyKind, PolicyState};
use crate::vector::ParamVector;

/// When to evaluate the full-batch objective.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueCadence {
    Never,
    /// At `k = 0` and at the first iterate of every new epoch.
    #[default]
    Epoch,
    EveryIteration,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub run_id: String,
    pub policy: PolicyConfig,
    /// Starting point; zeros when absent.
    pub x0: Option<ParamVector>,
    pub epochs: f64,
    pub batch_size: usize,
    pub stream: RngStream,
    /// Fix every batch to the full index set.
    pub full_batch: bool,
    pub cadence: ValueCadence,
    /// Enables Lyapunov diagnostics on every record.
    pub reference: Option<ReferenceSolution>,
    pub max_iterations: Option<u64>,
    /// Keep every iterate and batch in the outcome.
    pub keep_history: bool,
}

impl RunConfig {
    pub fn new(policy: PolicyConfig, epochs: f64, batch_size: usize, stream: RngStream) -> Self {
        Self {
            run_id: policy.kind.name().to_string(),
            policy,
            x0: None,
            epochs,
            batch_size,
            stream,
            full_batch: false,
            cadence: ValueCadence::Epoch,
            reference: None,
            max_iterations: None,
            keep_history: false,
        }
    }

    pub fn full_batch(mut self) -> Self {
        self.full_batch = true;
        self
    }

    pub fn with_reference(mut self, reference: ReferenceSolution) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_cadence(mut self, cadence: ValueCadence) -> Self {
        self.cadence = cadence;
        self
    }

    pub fn with_x0(mut self, x0: ParamVector) -> Self {
        self.x0 = Some(x0);
        self
    }

    pub fn with_run_id(mut self, id: impl Into<String>) -> Self {
        self.run_id = id.into();
        self
    }

    pub fn with_max_iterations(mut self, k: u64) -> Self {
        self.max_iterations = Some(k);
        self
    }

    pub fn keep_history(mut self) -> Self {
        self.keep_history = true;
        self
    }

    pub fn effective_batch(&self, n: usize) -> usize {
        if self.full_batch {
            n
        } else {
            self.batch_size
        }
    }

    /// `ceil(epochs * N / b)`, capped by `max_iterations`.
    pub fn iteration_budget(&self, n: usize) -> u64 {
        let b = self.effective_batch(n) as f64;
        let k = (self.epochs * n as f64 / b).ceil() as u64;
        self.max_iterations.map_or(k, |m| k.min(m))
    }

    pub fn validate(&self, problem: &dyn Objective) -> Result<()> {
        self.policy.validate()?;
        if !(self.epochs > 0.0 && self.epochs.is_finite()) {
            return Err(Error::Config(format!("epochs must be positive, got {}", self.epochs)));
        }
        if self.batch_size < 1 {
            return Err(Error::Config("batch_size must be at least 1".into()));
        }
        if let Some(x0) = &self.x0 {
            problem.check_point(x0)?;
            if !x0.is_finite() {
                return Err(Error::Config("x0 must be finite".into()));
            }
        }
        if let Some(r) = &self.reference {
            problem.check_point(&r.x_star)?;
        }
        Ok(())
    }
}

/// Per-iteration metric event.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub k: u64,
    /// `k * b / N`
    pub epoch: f64,
    pub lambda: f64,
    /// `f(x_k)` when the cadence asks for it.
    pub f_full: Option<f64>,
    /// Cumulative per-sample gradient evaluations after this iteration.
    pub grad_evals: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<LyapunovSnapshot>,
}

/// How a run ended.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// NaN or infinity in the iterate, the step or the objective.
    Divergence {
        k: u64,
    },
    Domain {
        k: u64,
        sample: usize,
    },
    /// `x_k = x_{k-1}`: the previous batch gradient vanished.
    StationaryPoint {
        k: u64,
    },
    /// The convex-oracle rule returned a zero step.
    OracleOptimal {
        k: u64,
    },
    OracleFault {
        k: u64,
        message: String,
    },
}

impl RunStatus {
    pub fn label(&self) -> &'static str {
        match self {
            RunStatus::Completed => "completed",
            RunStatus::Divergence { .. } => "divergence",
            RunStatus::Domain { .. } => "domain",
            RunStatus::StationaryPoint { .. } => "stationary-point",
            RunStatus::OracleOptimal { .. } => "oracle-optimal",
            RunStatus::OracleFault { .. } => "oracle-fault",
        }
    }

    /// Divergence, domain violations and oracle faults; the other early
    /// stops land on a minimizer.
    pub fn is_failure(&self) -> bool {
        matches!(
            self,
            RunStatus::Divergence { .. } | RunStatus::Domain { .. } | RunStatus::OracleFault { .. }
        )
    }
}

/// Everything needed to resume a run at the start of iteration `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunState {
    pub k: u64,
    pub x_curr: ParamVector,
    pub x_prev: Option<ParamVector>,
    /// `λ_{k-1}`, `λ_{k-2}`
    pub policy: PolicyState,
    pub batch_prev: Option<MinibatchIndex>,
    /// `∇f_{ξ_{k-1}}(x_{k-1})`
    pub grad_prev_on_prev: Option<ParamVector>,
    /// `f(x_{k-1})`, kept by the convex-oracle rule.
    pub f_prev: Option<f64>,
    pub grad_evals: u64,
    pub stream: RngStream,
    pub rng_word_pos: u128,
}

/// The ingredients of one step decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepEvent {
    pub k: u64,
    pub lambda: f64,
    /// `L_hat_{k-1}` on the previous batch, when measured.
    pub l_hat: Option<f64>,
    /// Curvature branch of the minimum.
    pub cap: Option<f64>,
    /// Growth branch of the minimum.
    pub growth: Option<f64>,
    /// `ξ_k`, kept with the history.
    pub batch: Option<MinibatchIndex>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub run_id: String,
    pub records: Vec<RunRecord>,
    pub trace: Vec<StepEvent>,
    pub state: RunState,
    pub status: RunStatus,
    /// `f` at the last iterate, unless the cadence is `Never` or it is not finite.
    pub final_value: Option<f64>,
    /// Epoch position of the last iterate.
    pub final_epoch: f64,
    /// `x_0, ..., x_K` with the history.
    pub iterates: Vec<ParamVector>,
}

impl RunOutcome {
    /// `λ_0, ..., λ_{K-1}`
    pub fn lambdas(&self) -> Vec<f64> {
        self.trace.iter().map(|e| e.lambda).collect()
    }

    pub fn snapshots(&self) -> impl Iterator<Item = (u64, &LyapunovSnapshot)> {
        self.records
            .iter()
            .filter_map(|r| r.diagnostics.as_ref().map(|d| (r.k, d)))
    }

    /// `(k, T_k)` series.
    pub fn lyapunov_series(&self) -> Vec<(u64, f64)> {
        self.snapshots().map(|(k, s)| (k, s.t_k)).collect()
    }

    /// `(epoch, f)` at every evaluated iterate, ending with the last one.
    pub fn value_curve(&self) -> Vec<(f64, f64)> {
        let mut curve: Vec<(f64, f64)> = self
            .records
            .iter()
            .filter_map(|r| r.f_full.map(|f| (r.epoch, f)))
            .collect();
        if let Some(f) = self.final_value {
            if curve.last().is_none_or(|&(e, _)| e < self.final_epoch) {
                curve.push((self.final_epoch, f));
            }
        }
        curve
    }
}

enum Stop {
    Status(RunStatus),
    Fatal(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Fatal(e)
    }
}

/// Turns oracle errors raised mid-run into terminal statuses.
fn oracle_stop(k: u64) -> impl Fn(Error) -> Stop {
    move |e| match e {
        Error::Domain { sample, .. } => Stop::Status(RunStatus::Domain { k, sample }),
        Error::InconsistentOracle | Error::InconsistentOptimum { .. } => Stop::Status(RunStatus::OracleFault {
            k,
            message: e.to_string(),
        }),
        other => Stop::Fatal(other),
    }
}

/// Drives one run iteration by iteration.
pub struct Runner<'a> {
    problem: &'a dyn Objective,
    cfg: RunConfig,
    state: RunState,
    rng: rand_chacha::ChaCha8Rng,
    budget: u64,
    batch_size: usize,
}

impl<'a> Runner<'a> {
    pub fn new(problem: &'a dyn Objective, cfg: RunConfig) -> Result<Self> {
        cfg.validate(problem)?;
        let state = RunState {
            k: 0,
            x_curr: cfg.x0.clone().unwrap_or_else(|| ParamVector::zeros(problem.dim())),
            x_prev: None,
            policy: PolicyState::default(),
            batch_prev: None,
            grad_prev_on_prev: None,
            f_prev: None,
            grad_evals: 0,
            stream: cfg.stream,
            rng_word_pos: 0,
        };
        Self::resume(problem, cfg, state)
    }

    /// Continues from a saved state.
    pub fn resume(problem: &'a dyn Objective, cfg: RunConfig, state: RunState) -> Result<Self> {
        cfg.validate(problem)?;
        problem.check_point(&state.x_curr)?;
        let n = problem.n_samples();
        Ok(Self {
            problem,
            budget: cfg.iteration_budget(n),
            batch_size: cfg.effective_batch(n),
            rng: state.stream.rng_at(state.rng_word_pos),
            cfg,
            state,
        })
    }

    pub fn state(&self) -> &RunState {
        &self.state
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn is_done(&self) -> bool {
        self.state.k >= self.budget
    }

    /// Switches to another random stream from the current iteration on.
    pub fn reseed(&mut self, stream: RngStream) {
        self.state.stream = stream;
        self.state.rng_word_pos = 0;
        self.rng = stream.rng();
    }

    fn draw(&mut self) -> Result<MinibatchIndex> {
        let n = self.problem.n_samples();
        if self.cfg.full_batch {
            Ok(MinibatchIndex::full(n))
        } else {
            sample_minibatch(&mut self.rng, n, self.batch_size)
        }
    }

    /// Charged oracle call.
    fn grad(&mut self, batch: &MinibatchIndex, x: &[f64], k: u64) -> Result<ParamVector, Stop> {
        self.state.grad_evals += batch.len() as u64;
        self.problem.minibatch_grad(batch, x).map_err(oracle_stop(k))
    }

    fn epoch_of(&self, k: u64) -> f64 {
        (k as f64 * self.batch_size as f64) / self.problem.n_samples() as f64
    }

    fn at_epoch_boundary(&self, k: u64) -> bool {
        let (b, n) = (self.batch_size as u64, self.problem.n_samples() as u64);
        k == 0 || (k * b) / n > ((k - 1) * b) / n
    }

    /// Runs iteration `k`.
    pub fn step(&mut self) -> Result<(RunRecord, StepEvent), RunStatus> {
        let k = self.state.k;
        self.try_step().map_err(|stop| match stop {
            Stop::Status(s) => s,
            Stop::Fatal(e) => RunStatus::OracleFault {
                k,
                message: e.to_string(),
            },
        })
    }

    fn try_step(&mut self) -> Result<(RunRecord, StepEvent), Stop> {
        let k = self.state.k;
        let policy = self.cfg.policy.clone();
        let kind = policy.kind;
        let x = self.state.x_curr.clone();

        let batch = self.draw()?;
        let fresh = if kind == PolicyKind::MmUnbiased && k >= 1 {
            Some(self.draw()?)
        } else {
            None
        };

        let wants_value = match self.cfg.cadence {
            ValueCadence::Never => false,
            ValueCadence::Epoch => self.at_epoch_boundary(k),
            ValueCadence::EveryIteration => true,
        };
        let f_curr = if wants_value || kind == PolicyKind::ConvexOracle || self.cfg.reference.is_some() {
            let f = self.problem.full_value(&x).map_err(oracle_stop(k))?;
            if !f.is_finite() {
                return Err(Stop::Status(RunStatus::Divergence { k }));
            }
            Some(f)
        } else {
            None
        };

        let mut event = StepEvent {
            k,
            lambda: policy.lambda0,
            l_hat: None,
            cap: None,
            growth: None,
            batch: None,
        };
        // ∇f_{ξ_{k-1}}(x_k) and ∇f_{ξ_k}(x_k) when the step rule already produced them
        let mut prev_batch_grad: Option<ParamVector> = None;
        let mut current_grad: Option<ParamVector> = None;
        let mut scratch = self.state.policy.clone();

        let lambda = if k == 0 {
            policy.lambda0
        } else if kind.is_sgd() {
            stepsize::sgd_step(&policy, k)
        } else {
            let x_prev = self.state.x_prev.clone().expect("x_prev is set for k >= 1");
            if x == x_prev {
                return Err(Stop::Status(RunStatus::StationaryPoint { k }));
            }
            if kind.uses_previous_batch() {
                let pb = self.state.batch_prev.clone().expect("batch_prev is set for k >= 1");
                let g_new = self.grad(&pb, &x, k)?;
                let g_old = self.state.grad_prev_on_prev.as_ref().expect("set for k >= 1");
                let l_hat = stepsize::local_lipschitz_estimate(&g_new, g_old, &x, &x_prev).map_err(oracle_stop(k))?;
                let factor = kind.curvature_factor().expect("adaptive policy");
                event.l_hat = Some(l_hat);
                let lambda = if k == 1 {
                    let first = stepsize::first_adaptive_step(l_hat, factor, policy.lambda0);
                    event.cap = Some(first);
                    match kind {
                        PolicyKind::ConvexOracle => {
                            let third = stepsize::objective_decrease_cap(
                                policy.lambda0,
                                self.state.f_prev.expect("tracked"),
                                f_curr.expect("evaluated"),
                                policy.f_star.expect("validated"),
                            )
                            .map_err(oracle_stop(k))?;
                            first.min(third)
                        }
                        _ => first,
                    }
                } else {
                    event.growth = Some(stepsize::growth_bound(&scratch, &policy, k)?);
                    match kind {
                        PolicyKind::AdaGd => {
                            event.cap = Some(stepsize::curvature_cap(l_hat, factor));
                            stepsize::adagd_det_step(&mut scratch, l_hat, k)?
                        }
                        PolicyKind::ConvexOracle => {
                            event.cap = Some(stepsize::curvature_cap(l_hat, factor));
                            stepsize::convex_oracle_step(
                                &mut scratch,
                                &policy,
                                l_hat,
                                self.state.f_prev.expect("tracked"),
                                f_curr.expect("evaluated"),
                                k,
                            )
                            .map_err(oracle_stop(k))?
                        }
                        _ => {
                            event.cap = Some(stepsize::adasgd_cap(&policy, l_hat, k));
                            stepsize::adasgd_step(&mut scratch, &policy, l_hat, k)?
                        }
                    }
                };
                if pb == batch {
                    // same oracle: ∇f_{ξ_k}(x_k) is already known
                    current_grad = Some(g_new.clone());
                }
                prev_batch_grad = Some(g_new);
                lambda
            } else {
                // MM: Λ_k on ξ_k (biased) or on an independent ζ_k (unbiased)
                let probe = fresh.clone().unwrap_or_else(|| batch.clone());
                let g_new = self.grad(&probe, &x, k)?;
                let g_old = self.grad(&probe, &x_prev, k)?;
                let ratio = stepsize::mm_ratio(&g_new, &g_old, &x, &x_prev).map_err(oracle_stop(k))?;
                if probe == batch {
                    current_grad = Some(g_new);
                }
                event.cap = Some(policy.alpha() * ratio);
                if k == 1 {
                    if ratio.is_finite() {
                        policy.alpha() * ratio
                    } else {
                        policy.lambda0
                    }
                } else {
                    event.growth = Some(stepsize::growth_bound(&scratch, &policy, k)?);
                    stepsize::mm_step(&mut scratch, &policy, ratio, k)?
                }
            }
        };
        event.lambda = lambda;
        if kind == PolicyKind::ConvexOracle && lambda == 0.0 {
            return Err(Stop::Status(RunStatus::OracleOptimal { k }));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Stop::Status(RunStatus::Divergence { k }));
        }

        let g = match current_grad {
            Some(g) => g,
            None => self.grad(&batch, &x, k)?,
        };
        let mut x_next = x.clone();
        x_next.axpy(-lambda, &g)?;
        if !x_next.is_finite() {
            return Err(Stop::Status(RunStatus::Divergence { k }));
        }

        let diagnostics = match &self.cfg.reference {
            Some(reference) if k >= 1 => {
                let x_prev = self.state.x_prev.as_ref().expect("set for k >= 1");
                let pb = self.state.batch_prev.as_ref().expect("set for k >= 1");
                // uncharged: instrumentation, not part of the method
                let g_pb = match prev_batch_grad {
                    Some(g) => g,
                    None => self.problem.minibatch_grad(pb, &x).map_err(oracle_stop(k))?,
                };
                let l_hat = match event.l_hat {
                    Some(l) => l,
                    None => stepsize::local_lipschitz_estimate(
                        &g_pb,
                        self.state.grad_prev_on_prev.as_ref().expect("set for k >= 1"),
                        &x,
                        x_prev,
                    )
                    .map_err(oracle_stop(k))?,
                };
                let lambda_prev = self.state.policy.lambda_prev.expect("set for k >= 1");
                let check = StepCheck {
                    k,
                    lambda,
                    l_hat: Some(l_hat),
                    lambda_prev: Some(lambda_prev),
                    lambda_prevprev: self.state.policy.lambda_prevprev,
                };
                let mut snap = diagnostics::lyapunov(
                    &x_next,
                    &x,
                    lambda,
                    lambda / lambda_prev,
                    f_curr.expect("evaluated"),
                    reference,
                    &check,
                )?;
                snap.noise_term = Some(diagnostics::noise_term(&g, &g_pb, lambda)?);
                Some(snap)
            }
            _ => None,
        };

        let record = RunRecord {
            run_id: self.cfg.run_id.clone(),
            k,
            epoch: self.epoch_of(k),
            lambda,
            f_full: if wants_value { f_curr } else { None },
            grad_evals: self.state.grad_evals,
            diagnostics,
        };
        if self.cfg.keep_history {
            event.batch = Some(batch.clone());
        }

        self.state.policy.push(lambda);
        self.state.x_prev = Some(std::mem::replace(&mut self.state.x_curr, x_next));
        self.state.batch_prev = Some(batch);
        self.state.grad_prev_on_prev = Some(g);
        self.state.f_prev = f_curr;
        self.state.k = k + 1;
        self.state.rng_word_pos = self.rng.get_word_pos();
        Ok((record, event))
    }

    /// Runs to the iteration budget or the first terminal status.
    pub fn run_to_end(mut self) -> RunOutcome {
        let mut records = Vec::new();
        let mut trace = Vec::new();
        let mut iterates = Vec::new();
        if self.cfg.keep_history {
            iterates.push(self.state.x_curr.clone());
        }
        let mut status = RunStatus::Completed;
        while !self.is_done() {
            match self.step() {
                Ok((record, event)) => {
                    records.push(record);
                    trace.push(event);
                    if self.cfg.keep_history {
                        iterates.push(self.state.x_curr.clone());
                    }
                }
                Err(s) => {
                    status = s;
                    break;
                }
            }
        }
        let final_value = match self.cfg.cadence {
            ValueCadence::Never => None,
            _ => self
                .problem
                .full_value(&self.state.x_curr)
                .ok()
                .filter(|f| f.is_finite()),
        };
        RunOutcome {
            run_id: self.cfg.run_id.clone(),
            final_epoch: self.epoch_of(self.state.k),
            records,
            trace,
            state: self.state,
            status,
            final_value,
            iterates,
        }
    }
}

/// Runs the configured policy on `problem`.
pub fn run(problem: &dyn Objective, cfg: RunConfig) -> Result<RunOutcome> {
    Ok(Runner::new(problem, cfg)?.run_to_end())
}

/// The deterministic reduction: every batch is the full index set, so one
/// iteration is one epoch.
pub fn run_full_batch(problem: &dyn Objective, cfg: RunConfig) -> Result<RunOutcome> {
    run(problem, cfg.full_batch())
}

/// Convex combination of iterates with total weight `S_K`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AveragedIterate {
    pub x_hat: ParamVector,
    /// `λ_1²/λ_0 + Σ_{k=1}^{K} λ_k`
    pub s_k: f64,
    /// `w_1, ..., w_{K-1}` followed by the leading coefficient of `x_K`.
    pub weights: Vec<f64>,
}

/// `x̂_K = [(λ_K + λ_K²/λ_{K-1}) x_K + Σ_{k=1}^{K-1} w_k x_k] / S_K` with
/// `w_k = λ_k + λ_k²/λ_{k-1} - λ_{k+1}²/λ_k`.
///
/// `lambdas` holds `λ_0..=λ_K` and `xs` holds at least `x_0..=x_K`.
pub fn averaged_iterate(lambdas: &[f64], xs: &[ParamVector], k_final: usize) -> Result<AveragedIterate> {
    if k_final < 2 {
        return Err(Error::Config(format!("averaging needs K >= 2, got {k_final}")));
    }
    if lambdas.len() <= k_final || xs.len() <= k_final {
        return Err(Error::Config(format!(
            "need lambda_0..=lambda_{k_final} and x_0..=x_{k_final} (got {} and {})",
            lambdas.len(),
            xs.len()
        )));
    }
    let l = lambdas;
    let mut weights = Vec::with_capacity(k_final);
    for k in 1..k_final {
        let w = l[k] + l[k] * l[k] / l[k - 1] - l[k + 1] * l[k + 1] / l[k];
        if w < -1e-12 {
            return Err(Error::NegativeWeight { k, weight: w });
        }
        weights.push(w);
    }
    weights.push(l[k_final] + l[k_final] * l[k_final] / l[k_final - 1]);

    let s_k = l[1] * l[1] / l[0] + l[1..=k_final].iter().sum::<f64>();
    let total: f64 = weights.iter().sum();
    // the weights telescope to S_K
    if (total - s_k).abs() > 1e-10 * s_k.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::Config(format!("weights sum to {total}, expected S_K = {s_k}")));
    }
    let mut x_hat = ParamVector::zeros(xs[0].dim());
    for (w, x) in weights.iter().zip(&xs[1..=k_final]) {
        x_hat.axpy(*w / s_k, x)?;
    }
    Ok(AveragedIterate { x_hat, s_k, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Dataset, LossKind, Problem, QuadraticFixture};

    fn half_square() -> QuadraticFixture {
        QuadraticFixture::new(vec![1.0], vec![vec![0.0]]).unwrap()
    }

    #[test]
    fn constant_sgd_on_unit_quadratic_is_geometric() {
        let q = half_square();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::SgdConst, 0.1),
            30.0,
            1,
            RngStream::new(0, 0),
        )
        .with_x0(ParamVector::new(vec![1.0]))
        .keep_history();
        let out = run_full_batch(&q, cfg).unwrap();
        assert_eq!(out.status, RunStatus::Completed);
        let mut expect = 1.0f64;
        for (k, x) in out.iterates.iter().enumerate() {
            assert_eq!(x[0], expect);
            assert!((x[0] - 0.9f64.powi(k as i32)).abs() <= 1e-15);
            expect -= 0.1 * expect;
        }
        assert_eq!(out.iterates.len(), 31);
    }

    #[test]
    fn first_step_uses_lambda0() {
        let q = half_square();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3),
            3.0,
            1,
            RngStream::new(0, 0),
        )
        .with_x0(ParamVector::new(vec![1.0]))
        .keep_history();
        let out = run_full_batch(&q, cfg).unwrap();
        assert_eq!(out.iterates[1][0], 1.0 - 1e-3);
        assert!((out.trace[1].lambda - 1.0 / stepsize::ADASGD_FACTOR).abs() < 1e-12);
    }

    #[test]
    fn full_batch_run_counts_one_iteration_per_epoch() {
        let q = QuadraticFixture::random(vec![1.0, 2.0], 10, 1.0, 0).unwrap();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::AdaSgdII, 1e-3),
            5.0,
            3,
            RngStream::new(0, 0),
        );
        let out = run_full_batch(&q, cfg).unwrap();
        assert_eq!(out.records.len(), 5);
        let epochs: Vec<f64> = out.records.iter().map(|r| r.epoch).collect();
        assert_eq!(epochs, vec![0.0, 1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn gradient_counts() {
        let q = QuadraticFixture::random(vec![1.0, 2.0], 64, 1.0, 0).unwrap();
        let stream = RngStream::new(1, 2);
        let ada = run(
            &q,
            RunConfig::new(PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3), 4.0, 8, stream),
        )
        .unwrap();
        let sgd = run(
            &q,
            RunConfig::new(PolicyConfig::new(PolicyKind::SgdConst, 1e-3), 4.0, 8, stream),
        )
        .unwrap();
        // 32 iterations; AdaSGD pays 2 batches from k = 1 on
        assert_eq!(sgd.state.grad_evals, 32 * 8);
        assert_eq!(ada.state.grad_evals, 32 * 8 + 31 * 8);
    }

    #[test]
    fn epoch_accounting_is_exact() {
        let q = QuadraticFixture::random(vec![1.0], 64, 1.0, 0).unwrap();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::SgdConst, 1e-3),
            2.0,
            8,
            RngStream::new(0, 0),
        );
        let out = run(&q, cfg).unwrap();
        assert_eq!(out.records[8].epoch, 1.0);
        assert!(out.records[8].f_full.is_some());
        assert!(out.records[7].f_full.is_none());
        assert_eq!(out.value_curve().last().unwrap().0, 2.0);
    }

    #[test]
    fn interpolating_fixture_stops_at_stationary_point() {
        // one sample: after a zero gradient the iterate repeats
        let ds = Dataset::from_rows("one", &[vec![1.0]], vec![0.0]).unwrap();
        let p = Problem::new(ds, LossKind::Linear).unwrap();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::AdaSgdI, 1.0),
            10.0,
            1,
            RngStream::new(0, 0),
        )
        .with_x0(ParamVector::new(vec![1.0]));
        let out = run(&p, cfg).unwrap();
        assert_eq!(out.status, RunStatus::StationaryPoint { k: 2 });
    }

    #[test]
    fn huge_constant_step_diverges() {
        let q = QuadraticFixture::random(vec![10.0], 8, 1.0, 0).unwrap();
        let cfg = RunConfig::new(
            PolicyConfig::new(PolicyKind::SgdConst, 100.0),
            1000.0,
            8,
            RngStream::new(0, 0),
        );
        let out = run(&q, cfg).unwrap();
        assert!(matches!(out.status, RunStatus::Divergence { .. }));
        assert!(out.status.is_failure());
    }

    #[test]
    fn averaging_constant_steps() {
        let c = 0.5;
        let xs: Vec<ParamVector> = (0..5).map(|i| ParamVector::new(vec![i as f64])).collect();
        let avg = averaged_iterate(&[c; 5], &xs, 4).unwrap();
        assert_eq!(avg.weights, vec![c, c, c, 2.0 * c]);
        assert_eq!(avg.s_k, c + 4.0 * c);
        let expect = (c * 1.0 + c * 2.0 + c * 3.0 + 2.0 * c * 4.0) / avg.s_k;
        assert!((avg.x_hat[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn averaging_small_and_degenerate_cases() {
        let xs = vec![
            ParamVector::new(vec![9.0]),
            ParamVector::new(vec![1.0]),
            ParamVector::new(vec![2.0]),
        ];
        let avg = averaged_iterate(&[0.1, 0.2, 0.2], &xs, 2).unwrap();
        assert_eq!(avg.weights.len(), 2);
        let same = vec![ParamVector::new(vec![3.0]); 4];
        let avg = averaged_iterate(&[0.1, 0.2, 0.25, 0.3], &same, 3).unwrap();
        assert!((avg.x_hat[0] - 3.0).abs() < 1e-14);
        assert!(averaged_iterate(&[0.1, 0.2], &same, 1).is_err());
    }

    #[test]
    fn averaging_flags_negative_weights() {
        let xs = vec![ParamVector::new(vec![0.0]); 4];
        // λ_2 far above the growth bound
        assert!(matches!(
            averaged_iterate(&[1.0, 1.0, 10.0, 10.0], &xs, 3),
            Err(Error::NegativeWeight { k: 1, .. })
        ));
    }
}
