//! Numerical instruments for the convergence analysis: the Lyapunov
//! sequence, the two step-size conditions, the sampling-noise residual,
//! and the step-size bounds on strongly convex quadratics.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::StepEvent;
use crate::problems::{Objective, ReferenceSolution};
use crate::sampling::MinibatchIndex;
use crate::stepsize::{PolicyKind, ADASGD_FACTOR};
use crate::vector::{dist, dist_sq, norm_sq};

/// Relative slack for the pathwise step-size conditions.
pub const CONDITION_RTOL: f64 = 1e-12;

/// `T_k` and its three terms at iteration `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSnapshot {
    pub t_k: f64,
    /// `‖x_{k+1} - x*‖²`
    pub term_dist: f64,
    /// `2 λ_k (1 + θ_k) (f(x_k) - f*)`
    pub term_gap: f64,
    /// `‖x_{k+1} - x_k‖² / 2`
    pub term_delta: f64,
    pub cond1_ok: bool,
    pub cond2_ok: bool,
    /// `4 λ_k² ‖∇f_{ξ_k}(x_k) - ∇f_{ξ_{k-1}}(x_k)‖²`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_term: Option<f64>,
}

/// What the two conditions need to know about one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepCheck {
    pub k: u64,
    pub lambda: f64,
    /// `L_hat_{k-1}` on the previous batch.
    pub l_hat: Option<f64>,
    pub lambda_prev: Option<f64>,
    pub lambda_prevprev: Option<f64>,
}

impl StepCheck {
    /// `λ_k <= ‖x_k - x_{k-1}‖ / (2√2 ‖∇f_{ξ_{k-1}}(x_k) - ∇f_{ξ_{k-1}}(x_{k-1})‖)`.
    pub fn cond1(&self) -> bool {
        match self.l_hat {
            Some(l) if l > 0.0 => self.lambda * ADASGD_FACTOR * l <= 1.0 + CONDITION_RTOL,
            _ => true,
        }
    }

    /// `λ_k <= λ_{k-1} √(1 + θ_{k-1})`, the pathwise form.
    pub fn cond2(&self) -> bool {
        match (self.lambda_prev, self.lambda_prevprev) {
            (Some(p), Some(pp)) => self.lambda <= p * (1.0 + p / pp).sqrt() * (1.0 + CONDITION_RTOL),
            _ => true,
        }
    }

    /// The tighter variant-III growth bound `λ_{k-1} √(1 + (1 - k^-p) θ_{k-1})`.
    pub fn cond2_damped(&self, delta: f64) -> bool {
        match (self.lambda_prev, self.lambda_prevprev) {
            (Some(p), Some(pp)) => {
                let w = 1.0 - (self.k as f64).powf(-(0.5 + delta));
                self.lambda <= p * (1.0 + w * p / pp).sqrt() * (1.0 + CONDITION_RTOL)
            }
            _ => true,
        }
    }
}

/// Evaluates `T_k` with `θ_k = λ_k / λ_{k-1}`.
pub fn lyapunov(
    x_next: &[f64],
    x_curr: &[f64],
    lambda_k: f64,
    theta_k: f64,
    f_curr: f64,
    reference: &ReferenceSolution,
    check: &StepCheck,
) -> Result<LyapunovSnapshot> {
    if !(theta_k > 0.0) {
        return Err(Error::Config(format!("theta_k must be positive, got {theta_k}")));
    }
    let term_dist = dist_sq(x_next, &reference.x_star)?;
    let term_gap = 2.0 * lambda_k * (1.0 + theta_k) * (f_curr - reference.f_star);
    let term_delta = dist_sq(x_next, x_curr)? / 2.0;
    Ok(LyapunovSnapshot {
        t_k: term_dist + term_gap + term_delta,
        term_dist,
        term_gap,
        term_delta,
        cond1_ok: check.cond1(),
        cond2_ok: check.cond2(),
        noise_term: None,
    })
}

/// `4 λ_k² ‖g_new - g_old‖²`, both gradients taken at `x_k`.
pub fn noise_term(g_new_batch: &[f64], g_old_batch_at_new: &[f64], lambda_k: f64) -> Result<f64> {
    Ok(4.0 * lambda_k * lambda_k * dist_sq(g_new_batch, g_old_batch_at_new)?)
}

/// `‖∇f_{ξ_k}(x*)‖² + ‖∇f_{ξ_{k-1}}(x*)‖²` for one drawn pair.
pub fn sigma_sq_surrogate(
    problem: &dyn Objective,
    reference: &ReferenceSolution,
    batch: &MinibatchIndex,
    batch_prev: &MinibatchIndex,
) -> Result<f64> {
    let a = problem.minibatch_grad(batch, &reference.x_star)?;
    let b = problem.minibatch_grad(batch_prev, &reference.x_star)?;
    Ok(norm_sq(&a) + norm_sq(&b))
}

/// Largest `‖x_k - x*‖` along a run.
pub fn iterate_radius(iterates: &[impl AsRef<[f64]>], x_star: &[f64]) -> Result<f64> {
    iterates
        .iter()
        .try_fold(0.0f64, |r, x| Ok(r.max(dist(x.as_ref(), x_star)?)))
}

/// Iterations `k >= 2` where `T_k > T_{k-1} + rtol * max(1, T_{k-1})`.
pub fn lyapunov_descent_violations(series: &[(u64, f64)], rtol: f64) -> Vec<u64> {
    series
        .windows(2)
        .filter(|w| w[1].0 >= 2 && w[1].0 == w[0].0 + 1)
        .filter(|w| w[1].1 > w[0].1 + rtol * w[0].1.max(1.0))
        .map(|w| w[1].0)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    /// `rhs - lhs`
    pub slack: f64,
}

/// Evaluates both sides of
/// `‖g₁(x) - g₂(x)‖² <= 4 [‖g₁(x) - g₁(x*)‖² + ‖g₂(x) - g₂(x*)‖² + ‖g₁(x*)‖² + ‖g₂(x*)‖²]`
/// for the minibatch oracles `g₁`, `g₂`.
pub fn lemma2_check(
    problem: &dyn Objective,
    x: &[f64],
    reference: &ReferenceSolution,
    batches: (&MinibatchIndex, &MinibatchIndex),
) -> Result<Lemma2Outcome> {
    let xs = &reference.x_star;
    let g1 = problem.minibatch_grad(batches.0, x)?;
    let g2 = problem.minibatch_grad(batches.1, x)?;
    let g1s = problem.minibatch_grad(batches.0, xs)?;
    let g2s = problem.minibatch_grad(batches.1, xs)?;
    let lhs = dist_sq(&g1, &g2)?;
    let rhs = 4.0 * (dist_sq(&g1, &g1s)? + dist_sq(&g2, &g2s)? + norm_sq(&g1s) + norm_sq(&g2s));
    Ok(Lemma2Outcome {
        lhs,
        rhs,
        satisfied: lhs <= rhs * (1.0 + CONDITION_RTOL),
        slack: rhs - lhs,
    })
}

/// Violation counts for the variant-III step-size bounds on a problem whose
/// sample functions are all `μ`-strongly convex and `L`-smooth.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub checked: usize,
    /// `1/(2√2 L k^p) <= λ_k <= 1/(2√2 μ k^p)`
    pub lambda_violations: usize,
    /// `θ_k >= μ / (2^δ √2 L)`
    pub theta_violations: usize,
    /// Lower and upper bounds on `λ_k θ_k`.
    pub lambda_theta_violations: usize,
    pub first_violation: Option<u64>,
    /// Lower bound on `λ_2`, for report headers.
    pub lambda2_lower: f64,
}

impl BoundsReport {
    pub fn total_violations(&self) -> usize {
        self.lambda_violations + self.theta_violations + self.lambda_theta_violations
    }
}

/// Checks every `k >= 2` of a step sequence `λ_0, λ_1, ...`.
pub fn lemma34_check(lambdas: &[f64], mu: f64, l: f64, delta: f64) -> Result<BoundsReport> {
    if !(mu > 0.0 && mu <= l) {
        return Err(Error::Config(format!("need 0 < mu <= L, got mu = {mu}, L = {l}")));
    }
    let p = 0.5 + delta;
    let two_delta = 2f64.powf(delta);
    let within = |lo: f64, v: f64, hi: f64| v >= lo * (1.0 - CONDITION_RTOL) && v <= hi * (1.0 + CONDITION_RTOL);
    let mut report = BoundsReport {
        lambda2_lower: 1.0 / (ADASGD_FACTOR * l * 2f64.powf(p)),
        ..Default::default()
    };
    for k in 2..lambdas.len() {
        let kp = (k as f64).powf(p);
        let (lam, prev, prevprev) = (lambdas[k], lambdas[k - 1], lambdas[k - 2]);
        let theta = lam / prev;
        let theta_prev = prev / prevprev;
        report.checked += 1;
        let mut bad = false;
        if !within(1.0 / (ADASGD_FACTOR * l * kp), lam, 1.0 / (ADASGD_FACTOR * mu * kp)) {
            report.lambda_violations += 1;
            bad = true;
        }
        if theta < mu / (two_delta * SQRT_2 * l) * (1.0 - CONDITION_RTOL) {
            report.theta_violations += 1;
            bad = true;
        }
        let lo = mu / (kp * two_delta * 4.0 * l * l);
        let hi = prev * (1.0 + theta_prev) * (1.0 - mu / (kp * (mu + two_delta * SQRT_2 * l)));
        if !within(lo, lam * theta, hi) {
            report.lambda_theta_violations += 1;
            bad = true;
        }
        if bad && report.first_violation.is_none() {
            report.first_violation = Some(k as u64);
        }
    }
    Ok(report)
}

/// Violation counts of the two conditions over a run's step trace.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub checked: usize,
    pub cond1_violations: usize,
    pub cond2_violations: usize,
    /// Variant III only: the damped growth bound.
    pub damped_violations: usize,
}

impl ConditionReport {
    pub fn merge(&mut self, other: &ConditionReport) {
        self.checked += other.checked;
        self.cond1_violations += other.cond1_violations;
        self.cond2_violations += other.cond2_violations;
        self.damped_violations += other.damped_violations;
    }

    pub fn all_hold(&self) -> bool {
        self.cond1_violations + self.cond2_violations + self.damped_violations == 0
    }
}

/// Checks both conditions at every `k >= 1` of a trace.
pub fn check_step_conditions(trace: &[StepEvent], kind: PolicyKind, delta: f64) -> ConditionReport {
    let mut report = ConditionReport::default();
    for (i, ev) in trace.iter().enumerate().filter(|(_, e)| e.k >= 1) {
        let check = StepCheck {
            k: ev.k,
            lambda: ev.lambda,
            l_hat: ev.l_hat,
            lambda_prev: i.checked_sub(1).map(|j| trace[j].lambda),
            lambda_prevprev: i.checked_sub(2).map(|j| trace[j].lambda),
        };
        report.checked += 1;
        report.cond1_violations += usize::from(!check.cond1());
        report.cond2_violations += usize::from(!check.cond2());
        if kind == PolicyKind::AdaSgdIII {
            report.damped_violations += usize::from(!check.cond2_damped(delta));
        }
    }
    report
}

/// One-sided Monte-Carlo test: is the sample mean at most `z` standard
/// errors above zero?
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanBound {
    pub n: usize,
    pub mean: f64,
    pub std_err: f64,
    pub satisfied: bool,
}

pub fn mean_not_above_zero(samples: &[f64], z: f64) -> Result<MeanBound> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::Config("need at least two samples".into()));
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let std_err = (var / n as f64).sqrt();
    Ok(MeanBound {
        n,
        mean,
        std_err,
        satisfied: mean <= z * std_err,
    })
}
