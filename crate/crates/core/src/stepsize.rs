//! Step-size policies.
//!
//! The adaptive rules share one shape: for `k >= 2`,
//!
//! ```text
//! lambda_k = min(curvature cap, growth bound)
//! ```
//!
//! where the curvature cap is `1 / (c * L_hat)` (optionally damped by
//! `k^-(1/2 + delta)`) and the growth bound is
//! `lambda_{k-1} * sqrt(1 + theta_{k-1})` with
//! `theta_{k-1} = lambda_{k-1} / lambda_{k-2}`.
//!
//! | policy        | `c`    | `L_hat` measured on                     | damping | growth            |
//! |---------------|--------|-----------------------------------------|---------|-------------------|
//! | `adasgd-i`    | `2√2`  | previous batch at `x_k`, `x_{k-1}`      | none    | `√(1+θ)`          |
//! | `adasgd-ii`   | `2√2`  | previous batch                          | `k^-p`  | `√(1+θ)`          |
//! | `adasgd-iii`  | `2√2`  | previous batch                          | `k^-p`  | `√(1+(1-k^-p)θ)`  |
//! | `adagd`       | `2`    | previous batch (full batch in practice) | none    | `√(1+θ)`          |
//! | `mm-*`        | `1/α`  | current batch (biased) / fresh batch    | none    | `√(1+θ)`          |
//! | `convex-oracle` | `2√2` | previous batch, plus an objective-decrease cap |  none | `√(1+θ)`        |
//!
//! A zero `L_hat` means no curvature was observed and the cap is `+∞`.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::dist;

/// `2√2`, the curvature factor of the stochastic rules.
pub const ADASGD_FACTOR: f64 = 2.0 * SQRT_2;
/// `2`, the curvature factor of deterministic adaptive GD.
pub const ADAGD_FACTOR: f64 = 2.0;
pub const DEFAULT_DELTA: f64 = 1e-2;
pub const DEFAULT_LAMBDA0: f64 = 1e-3;

/// Slack allowed when a caller's `f(x_k)` dips below the supplied `f*`.
const F_STAR_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PolicyKind {
    #[serde(rename = "adasgd-i")]
    AdaSgdI,
    #[serde(rename = "adasgd-ii")]
    AdaSgdII,
    #[serde(rename = "adasgd-iii")]
    AdaSgdIII,
    #[serde(rename = "adagd")]
    AdaGd,
    #[serde(rename = "mm-biased")]
    MmBiased,
    #[serde(rename = "mm-unbiased")]
    MmUnbiased,
    #[serde(rename = "sgd")]
    SgdConst,
    #[serde(rename = "sgd-decay")]
    SgdDecay,
    #[serde(rename = "convex-oracle")]
    ConvexOracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 9] = [
        PolicyKind::AdaSgdI,
        PolicyKind::AdaSgdII,
        PolicyKind::AdaSgdIII,
        PolicyKind::AdaGd,
        PolicyKind::MmBiased,
        PolicyKind::MmUnbiased,
        PolicyKind::SgdConst,
        PolicyKind::SgdDecay,
        PolicyKind::ConvexOracle,
    ];

    /// The seven algorithms of the sensitivity study.
    pub const BENCHMARK: [PolicyKind; 7] = [
        PolicyKind::AdaSgdI,
        PolicyKind::AdaSgdII,
        PolicyKind::AdaSgdIII,
        PolicyKind::MmBiased,
        PolicyKind::MmUnbiased,
        PolicyKind::SgdConst,
        PolicyKind::SgdDecay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::AdaSgdI => "adasgd-i",
            PolicyKind::AdaSgdII => "adasgd-ii",
            PolicyKind::AdaSgdIII => "adasgd-iii",
            PolicyKind::AdaGd => "adagd",
            PolicyKind::MmBiased => "mm-biased",
            PolicyKind::MmUnbiased => "mm-unbiased",
            PolicyKind::SgdConst => "sgd",
            PolicyKind::SgdDecay => "sgd-decay",
            PolicyKind::ConvexOracle => "convex-oracle",
        }
    }

    pub fn is_adasgd(self) -> bool {
        matches!(self, PolicyKind::AdaSgdI | PolicyKind::AdaSgdII | PolicyKind::AdaSgdIII)
    }

    pub fn is_mm(self) -> bool {
        matches!(self, PolicyKind::MmBiased | PolicyKind::MmUnbiased)
    }

    pub fn is_sgd(self) -> bool {
        matches!(self, PolicyKind::SgdConst | PolicyKind::SgdDecay)
    }

    /// Whether `lambda_k` is estimated from the previous minibatch
    /// evaluated at the current point.
    pub fn uses_previous_batch(self) -> bool {
        self.is_adasgd() || matches!(self, PolicyKind::AdaGd | PolicyKind::ConvexOracle)
    }

    pub fn uses_delta(self) -> bool {
        matches!(
            self,
            PolicyKind::AdaSgdII | PolicyKind::AdaSgdIII | PolicyKind::SgdDecay
        )
    }

    /// Curvature factor `c` in `1 / (c L_hat)`, for rules that have one.
    pub fn curvature_factor(self) -> Option<f64> {
        match self {
            PolicyKind::AdaGd => Some(ADAGD_FACTOR),
            k if k.uses_previous_batch() => Some(ADASGD_FACTOR),
            _ => None,
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown policy '{s}'")))
    }
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    pub lambda0: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Scale of the MM curvature cap. Defaults to `lambda0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Optimal value, required by `convex-oracle`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind, lambda0: f64) -> Self {
        Self {
            kind,
            lambda0,
            delta: DEFAULT_DELTA,
            alpha: None,
            f_star: None,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(self.lambda0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::Config(format!("lambda0 must be positive, got {}", self.lambda0)));
        }
        if self.kind.uses_delta() && !(self.delta > 0.0 && self.delta < 0.5) {
            return Err(Error::Config(format!("delta must lie in (0, 1/2), got {}", self.delta)));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Config(format!("alpha must be positive, got {a}")));
            }
        }
        if self.kind == PolicyKind::ConvexOracle && !self.f_star.is_some_and(f64::is_finite) {
            return Err(Error::Config("convex-oracle requires a finite f_star".into()));
        }
        Ok(())
    }

    /// `k^-(1/2 + delta)`.
    pub fn damping(&self, k: u64) -> f64 {
        (k as f64).powf(-(0.5 + self.delta))
    }
}

/// Step-size memory: the two most recent steps.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PolicyState {
    /// `lambda_{k-1}`
    pub lambda_prev: Option<f64>,
    /// `lambda_{k-2}`
    pub lambda_prevprev: Option<f64>,
}

impl PolicyState {
    /// Records `lambda_k` once it has been used.
    pub fn push(&mut self, lambda: f64) {
        self.lambda_prevprev = self.lambda_prev;
        self.lambda_prev = Some(lambda);
    }

    /// `theta_{k-1} = lambda_{k-1} / lambda_{k-2}`.
    pub fn theta_prev(&self) -> Option<f64> {
        Some(self.lambda_prev? / self.lambda_prevprev?)
    }

    fn history(&self, k: u64) -> Result<(f64, f64)> {
        if k < 2 {
            return Err(Error::Protocol(format!(
                "the recursive rule starts at k = 2 (got k = {k}); lambda_0 and lambda_1 have dedicated rules"
            )));
        }
        match (self.lambda_prev, self.theta_prev()) {
            (Some(l), Some(theta)) => Ok((l, theta)),
            _ => Err(Error::Protocol(format!("step history missing at k = {k}"))),
        }
    }
}

/// `‖g_new - g_old‖ / ‖x_new - x_old‖`.
///
/// Returns 0 when the gradients agree (no curvature observed), including
/// when the points coincide.
pub fn local_lipschitz_estimate(g_new: &[f64], g_old: &[f64], x_new: &[f64], x_old: &[f64]) -> Result<f64> {
    let num = dist(g_new, g_old)?;
    if num == 0.0 {
        return Ok(0.0);
    }
    let den = dist(x_new, x_old)?;
    if den == 0.0 {
        return Err(Error::InconsistentOracle);
    }
    Ok(num / den)
}

/// `1 / (factor * l_hat)`, or `+∞` when `l_hat` is zero.
pub fn curvature_cap(l_hat: f64, factor: f64) -> f64 {
    if l_hat == 0.0 {
        f64::INFINITY
    } else {
        1.0 / (factor * l_hat)
    }
}

/// `lambda_1 = 1 / (factor * L_hat_0)`, falling back to `lambda0` when no
/// curvature was observed.
pub fn first_adaptive_step(l_hat: f64, factor: f64, lambda0: f64) -> f64 {
    if l_hat == 0.0 {
        lambda0
    } else {
        curvature_cap(l_hat, factor)
    }
}

/// `lambda_1 = ‖x_1 - x_0‖ / (2√2 ‖g_1 - g_0‖)` where both gradients come
/// from the first minibatch.
pub fn adasgd_lambda1(x1: &[f64], x0: &[f64], g1: &[f64], g0: &[f64], lambda0: f64) -> Result<f64> {
    let l_hat = local_lipschitz_estimate(g1, g0, x1, x0)?;
    Ok(first_adaptive_step(l_hat, ADASGD_FACTOR, lambda0))
}

/// First argument of the AdaSGD minimum at iteration `k`.
pub fn adasgd_cap(cfg: &PolicyConfig, l_hat: f64, k: u64) -> f64 {
    match cfg.kind {
        PolicyKind::AdaSgdII | PolicyKind::AdaSgdIII => {
            curvature_cap(l_hat * (k as f64).powf(0.5 + cfg.delta), ADASGD_FACTOR)
        }
        _ => curvature_cap(l_hat, ADASGD_FACTOR),
    }
}

/// Second argument of the minimum: `lambda_{k-1} sqrt(1 + theta_{k-1})`,
/// or the damped form for variant III.
pub fn growth_bound(state: &PolicyState, cfg: &PolicyConfig, k: u64) -> Result<f64> {
    let (lambda_prev, theta) = state.history(k)?;
    let weight = match cfg.kind {
        PolicyKind::AdaSgdIII => 1.0 - cfg.damping(k),
        _ => 1.0,
    };
    Ok(lambda_prev * (1.0 + weight * theta).sqrt())
}

/// AdaSGD variants I/II/III for `k >= 2`. Updates `state`.
pub fn adasgd_step(state: &mut PolicyState, cfg: &PolicyConfig, l_hat: f64, k: u64) -> Result<f64> {
    if !cfg.kind.is_adasgd() {
        return Err(Error::Config(format!("{} is not an AdaSGD variant", cfg.kind)));
    }
    let lambda = adasgd_cap(cfg, l_hat, k).min(growth_bound(state, cfg, k)?);
    state.push(lambda);
    Ok(lambda)
}

/// `‖x_k - x_{k-1}‖ / ‖g(x_k) - g(x_{k-1})‖` on one batch; `+∞` when the
/// gradients agree.
pub fn mm_ratio(g_new: &[f64], g_old: &[f64], x_new: &[f64], x_old: &[f64]) -> Result<f64> {
    let l = local_lipschitz_estimate(g_new, g_old, x_new, x_old)?;
    Ok(if l == 0.0 { f64::INFINITY } else { 1.0 / l })
}

/// MM step `min(alpha * Lambda_k, lambda_{k-1} sqrt(1 + theta_{k-1}))`.
/// Updates `state`.
pub fn mm_step(state: &mut PolicyState, cfg: &PolicyConfig, capital_lambda: f64, k: u64) -> Result<f64> {
    let lambda = (cfg.alpha() * capital_lambda).min(growth_bound(state, cfg, k)?);
    state.push(lambda);
    Ok(lambda)
}

/// Deterministic adaptive GD: `min(1 / (2 L_hat), lambda_{k-1} sqrt(1 + theta_{k-1}))`.
/// Updates `state`.
pub fn adagd_det_step(state: &mut PolicyState, l_hat_full: f64, k: u64) -> Result<f64> {
    let (lambda_prev, theta) = state.history(k)?;
    let lambda = curvature_cap(l_hat_full, ADAGD_FACTOR).min(lambda_prev * (1.0 + theta).sqrt());
    state.push(lambda);
    Ok(lambda)
}

/// Constant or `lambda0 / k^(1/2 + delta)` steps; `lambda_0 = lambda0` for both.
pub fn sgd_step(cfg: &PolicyConfig, k: u64) -> f64 {
    match cfg.kind {
        PolicyKind::SgdDecay if k >= 1 => cfg.lambda0 * cfg.damping(k),
        _ => cfg.lambda0,
    }
}

/// Third argument of the convex-oracle minimum:
/// `lambda_{k-1} (f(x_k) - f*) / (f(x_{k-1}) - f(x_k))` when the objective
/// decreased, `+∞` otherwise.
pub fn objective_decrease_cap(lambda_prev: f64, f_prev: f64, f_curr: f64, f_star: f64) -> Result<f64> {
    if f_curr < f_star - F_STAR_SLACK {
        return Err(Error::InconsistentOptimum { f_curr, f_star });
    }
    let decrease = f_prev - f_curr;
    if decrease > 0.0 {
        Ok(lambda_prev * (f_curr - f_star).max(0.0) / decrease)
    } else {
        Ok(f64::INFINITY)
    }
}

/// Three-way minimum of the convex-oracle rule for `k >= 2`. A zero
/// result means `x_k` already attains `f*`. Updates `state`.
pub fn convex_oracle_step(
    state: &mut PolicyState,
    cfg: &PolicyConfig,
    l_hat: f64,
    f_prev: f64,
    f_curr: f64,
    k: u64,
) -> Result<f64> {
    let f_star = cfg
        .f_star
        .ok_or_else(|| Error::Config("convex-oracle requires f_star".into()))?;
    let growth = growth_bound(state, cfg, k)?;
    let (lambda_prev, _) = state.history(k)?;
    let third = objective_decrease_cap(lambda_prev, f_prev, f_curr, f_star)?;
    let lambda = curvature_cap(l_hat, ADASGD_FACTOR).min(growth).min(third);
    state.push(lambda);
    Ok(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(prevprev: f64, prev: f64) -> PolicyState {
        let mut s = PolicyState::default();
        s.push(prevprev);
        s.push(prev);
        s
    }

    #[test]
    fn lipschitz_estimate_examples() {
        // f(x) = 3/2 x^2
        let l = local_lipschitz_estimate(&[3.0 * 0.4], &[3.0 * -1.1], &[0.4], &[-1.1]).unwrap();
        assert!((l - 3.0).abs() < 1e-15);
        assert_eq!(
            local_lipschitz_estimate(&[1.0, 2.0], &[1.0, 2.0], &[0.0, 1.0], &[5.0, 5.0]).unwrap(),
            0.0
        );
        assert!(matches!(
            local_lipschitz_estimate(&[1.0], &[2.0], &[0.5], &[0.5]),
            Err(Error::InconsistentOracle)
        ));
    }

    #[test]
    fn linear_sample_curvature_along_its_feature() {
        // grad f_w(x) = (w.x - y) w; a displacement along w sees ||w||^2
        let w = [1.0, 1.0];
        let y = 0.3;
        let g = |x: &[f64]| {
            let r = w[0] * x[0] + w[1] * x[1] - y;
            [r * w[0], r * w[1]]
        };
        let x0 = [0.2, -0.7];
        let x1 = [x0[0] - 0.37 * w[0], x0[1] - 0.37 * w[1]];
        let l = local_lipschitz_estimate(&g(&x1), &g(&x0), &x1, &x0).unwrap();
        assert!((l - 2.0).abs() < 1e-14);
    }

    #[test]
    fn variant_one_flat_region_grows_by_sqrt_two() {
        let cfg = PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3);
        let mut s = state(0.25, 0.25);
        let l = adasgd_step(&mut s, &cfg, 0.0, 5).unwrap();
        assert_eq!(l, 0.25 * SQRT_2);
        assert_eq!(s.lambda_prev, Some(l));
        assert_eq!(s.lambda_prevprev, Some(0.25));
    }

    #[test]
    fn variant_three_cap_at_k4() {
        let cfg = PolicyConfig::new(PolicyKind::AdaSgdIII, 1e-3).with_delta(0.25);
        let mut s = state(1e6, 1e6);
        let l = adasgd_step(&mut s, &cfg, 1.0, 4).unwrap();
        assert!((l - 0.125).abs() < 1e-15);
    }

    #[test]
    fn variants_two_and_three_share_the_cap() {
        for k in [2u64, 3, 10, 1000] {
            let two = PolicyConfig::new(PolicyKind::AdaSgdII, 1e-3);
            let three = PolicyConfig::new(PolicyKind::AdaSgdIII, 1e-3);
            let a = adasgd_step(&mut state(10.0, 10.0), &two, 2.5, k).unwrap();
            let b = adasgd_step(&mut state(10.0, 10.0), &three, 2.5, k).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn recursive_rules_refuse_early_iterations() {
        let cfg = PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3);
        assert!(matches!(
            adasgd_step(&mut state(1.0, 1.0), &cfg, 1.0, 1),
            Err(Error::Protocol(_))
        ));
        assert!(matches!(
            adasgd_step(&mut PolicyState::default(), &cfg, 1.0, 2),
            Err(Error::Protocol(_))
        ));
    }

    #[test]
    fn lambda1_on_unit_quadratic() {
        // f = x^2/2, x0 = 1, lambda0 = 1e-3
        let x0 = [1.0];
        let x1 = [1.0 - 1e-3];
        let l1 = adasgd_lambda1(&x1, &x0, &x1, &x0, 1e-3).unwrap();
        assert!((l1 - 1.0 / (2.0 * SQRT_2)).abs() < 1e-12);
        assert!((l1 - 0.353553).abs() < 1e-6);
    }

    #[test]
    fn lambda1_homogeneity_and_flat_fallback() {
        let (x1, x0) = ([0.5, 0.1], [1.0, -0.2]);
        let (g1, g0) = ([0.3, 0.7], [1.1, -0.4]);
        let base = adasgd_lambda1(&x1, &x0, &g1, &g0, 1e-3).unwrap();
        let c = 4.0;
        let scaled = adasgd_lambda1(&x1, &x0, &g1.map(|v| v * c), &g0.map(|v| v * c), 1e-3).unwrap();
        assert!((scaled - base / c).abs() < 1e-15);
        assert_eq!(adasgd_lambda1(&x1, &x0, &g0, &g0, 1e-3).unwrap(), 1e-3);
    }

    #[test]
    fn mm_examples() {
        let cfg = PolicyConfig::new(PolicyKind::MmBiased, 1.0);
        assert_eq!(mm_step(&mut state(1.0, 1.0), &cfg, 0.1, 2).unwrap(), 0.1);
        let l = mm_step(&mut state(1.0, 1.0), &cfg, f64::INFINITY, 2).unwrap();
        assert_eq!(l, SQRT_2);
        assert_eq!(mm_ratio(&[1.0], &[1.0], &[2.0], &[0.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn adagd_examples() {
        // L = 1: cap 1/2
        let l = adagd_det_step(&mut state(10.0, 10.0), 1.0, 7).unwrap();
        assert_eq!(l, 0.5);
        let flat = adagd_det_step(&mut state(2.0, 1.0), 0.0, 7).unwrap();
        assert!((flat - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn adagd_and_variant_one_differ_by_sqrt_two_in_the_cap() {
        let cfg = PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3);
        let a = adasgd_step(&mut state(1e9, 1e9), &cfg, 3.0, 9).unwrap();
        let b = adagd_det_step(&mut state(1e9, 1e9), 3.0, 9).unwrap();
        assert!((b / a - SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn sgd_schedules() {
        let c = PolicyConfig::new(PolicyKind::SgdConst, 0.3);
        assert_eq!(sgd_step(&c, 0), 0.3);
        assert_eq!(sgd_step(&c, 123), 0.3);
        let d = PolicyConfig::new(PolicyKind::SgdDecay, 0.3);
        assert_eq!(sgd_step(&d, 0), 0.3);
        assert_eq!(sgd_step(&d, 1), 0.3);
        assert!((sgd_step(&d, 100) - 0.3 * 10f64.powf(-1.02)).abs() < 1e-15);
    }

    #[test]
    fn convex_oracle_examples() {
        let cfg = PolicyConfig::new(PolicyKind::ConvexOracle, 1e-3).with_f_star(0.0);
        // no decrease: reduces to the two-way rule
        let a = convex_oracle_step(&mut state(0.5, 0.5), &cfg, 0.2, 1.0, 1.0, 3).unwrap();
        let b = adasgd_step(
            &mut state(0.5, 0.5),
            &PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3),
            0.2,
            3,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(objective_decrease_cap(0.5, 2.0, 1.0, 0.0).unwrap(), 0.5);
        let c = convex_oracle_step(&mut state(0.5, 0.5), &cfg, 0.0, 2.0, 1.0, 3).unwrap();
        assert_eq!(c, 0.5);
        let zero = convex_oracle_step(&mut state(0.5, 0.5), &cfg, 0.2, 2.0, 0.0, 3).unwrap();
        assert_eq!(zero, 0.0);
        assert!(matches!(
            convex_oracle_step(&mut state(0.5, 0.5), &cfg, 0.2, 2.0, -1.0, 3),
            Err(Error::InconsistentOptimum { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(PolicyConfig::new(PolicyKind::AdaSgdII, 1e-3)
            .with_delta(0.5)
            .validate()
            .is_err());
        assert!(PolicyConfig::new(PolicyKind::AdaSgdII, 1e-3)
            .with_delta(0.0)
            .validate()
            .is_err());
        assert!(PolicyConfig::new(PolicyKind::AdaSgdI, 0.0).validate().is_err());
        assert!(PolicyConfig::new(PolicyKind::ConvexOracle, 1e-3).validate().is_err());
        assert!(PolicyConfig::new(PolicyKind::ConvexOracle, 1e-3)
            .with_f_star(0.0)
            .validate()
            .is_ok());
    }

    #[test]
    fn names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!("adam".parse::<PolicyKind>().is_err());
    }
}
