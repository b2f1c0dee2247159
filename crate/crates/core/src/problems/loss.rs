//! Per-sample losses. Every loss here is a function of the margin
//! `t = w^T x` and the target `y`, so the gradient is `phi'(t) * w`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{dot, ParamVector};

/// Strong-convexity weight of the ridge profile `g`.
pub const RIDGE_QUADRATIC_WEIGHT: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossKind {
    /// `1/2 (y - w^T x)^2`
    Linear,
    /// `g(y - w^T x)` with `g(t) = t^4/(1+t^2) + 0.01 t^2`
    RidgeSum,
    /// `log(1 + exp(-y w^T x))`
    Logistic,
    /// `log(-y w^T x + 1 + exp(w^T x))`
    Poisson,
}

impl LossKind {
    pub fn name(self) -> &'static str {
        match self {
            LossKind::Linear => "linear",
            LossKind::RidgeSum => "ridge-sum",
            LossKind::Logistic => "logistic",
            LossKind::Poisson => "poisson",
        }
    }

    /// `(phi(t), phi'(t))` for margin `t` and target `y`.
    ///
    /// Domain failures are reported with sample index 0; callers that know
    /// the index rewrite it.
    pub fn margin_value_and_slope(self, t: f64, y: f64) -> Result<(f64, f64)> {
        match self {
            LossKind::Linear => {
                let r = t - y;
                Ok((0.5 * r * r, r))
            }
            LossKind::RidgeSum => {
                let u = y - t;
                Ok((ridge_profile(u), -ridge_profile_slope(u)))
            }
            LossKind::Logistic => {
                if y != 1.0 && y != -1.0 {
                    return Err(Error::Data(format!("logistic target {y} is not in {{-1, +1}}")));
                }
                let z = -y * t;
                Ok((softplus(z), -y * sigmoid(z)))
            }
            LossKind::Poisson => poisson_margin(t, y),
        }
    }
}

/// `g(t) = t^4/(1+t^2) + 0.01 t^2`.
pub fn ridge_profile(t: f64) -> f64 {
    let t2 = t * t;
    t2 * t2 / (1.0 + t2) + RIDGE_QUADRATIC_WEIGHT * t2
}

/// `g'(t) = (2t^5 + 4t^3)/(1+t^2)^2 + 0.02 t`.
pub fn ridge_profile_slope(t: f64) -> f64 {
    let t2 = t * t;
    let den = (1.0 + t2) * (1.0 + t2);
    (2.0 * t2 * t2 * t + 4.0 * t2 * t) / den + 2.0 * RIDGE_QUADRATIC_WEIGHT * t
}

/// `log(1 + e^z)` without overflow.
pub fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `1 / (1 + e^{-z})` without overflow.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

// a(t) = -y t + 1 + e^t. For t > 0 everything is scaled by e^{-t} so that
// large margins neither overflow nor lose the linear term.
fn poisson_margin(t: f64, y: f64) -> Result<(f64, f64)> {
    if t > 0.0 {
        let et = (-t).exp();
        let rest = (1.0 - y * t) * et;
        if !(rest > -1.0) {
            return Err(poisson_domain(t, y));
        }
        let value = t + rest.ln_1p();
        let slope = (1.0 - y * et) / (1.0 + rest);
        Ok((value, slope))
    } else {
        let e = t.exp();
        let a = -y * t + 1.0 + e;
        if !(a > 0.0) {
            return Err(poisson_domain(t, y));
        }
        Ok((a.ln(), (e - y) / a))
    }
}

fn poisson_domain(t: f64, y: f64) -> Error {
    Error::Domain {
        sample: 0,
        message: format!("-y*t + 1 + exp(t) <= 0 at t = {t}, y = {y}"),
    }
}

fn eval(kind: LossKind, w: &[f64], y: f64, x: &[f64]) -> Result<(f64, f64)> {
    let t = dot(w, x)?;
    kind.margin_value_and_slope(t, y)
}

fn grad_from_slope(w: &[f64], slope: f64) -> ParamVector {
    ParamVector::new(w.iter().map(|wi| slope * wi).collect())
}

pub fn loss_linear(w: &[f64], y: f64, x: &[f64]) -> Result<f64> {
    Ok(eval(LossKind::Linear, w, y, x)?.0)
}

pub fn grad_linear(w: &[f64], y: f64, x: &[f64]) -> Result<ParamVector> {
    Ok(grad_from_slope(w, eval(LossKind::Linear, w, y, x)?.1))
}

pub fn loss_ridge_sum(w: &[f64], y: f64, x: &[f64]) -> Result<f64> {
    Ok(eval(LossKind::RidgeSum, w, y, x)?.0)
}

pub fn grad_ridge_sum(w: &[f64], y: f64, x: &[f64]) -> Result<ParamVector> {
    Ok(grad_from_slope(w, eval(LossKind::RidgeSum, w, y, x)?.1))
}

pub fn loss_logistic(w: &[f64], y: f64, x: &[f64]) -> Result<f64> {
    Ok(eval(LossKind::Logistic, w, y, x)?.0)
}

pub fn grad_logistic(w: &[f64], y: f64, x: &[f64]) -> Result<ParamVector> {
    Ok(grad_from_slope(w, eval(LossKind::Logistic, w, y, x)?.1))
}

pub fn loss_poisson(w: &[f64], y: f64, x: &[f64]) -> Result<f64> {
    Ok(eval(LossKind::Poisson, w, y, x)?.0)
}

pub fn grad_poisson(w: &[f64], y: f64, x: &[f64]) -> Result<ParamVector> {
    Ok(grad_from_slope(w, eval(LossKind::Poisson, w, y, x)?.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::norm;

    #[test]
    fn linear_hand_values() {
        let w = [1.0, 0.0];
        let x = [2.0, 5.0];
        assert_eq!(loss_linear(&w, 0.0, &x).unwrap(), 2.0);
        assert_eq!(grad_linear(&w, 0.0, &x).unwrap().as_slice(), &[2.0, 0.0]);
        let exact = [1.0, 1.0];
        assert_eq!(loss_linear(&[0.5, 0.5], 1.0, &exact).unwrap(), 0.0);
        assert_eq!(norm(&grad_linear(&[0.5, 0.5], 1.0, &exact).unwrap()), 0.0);
    }

    #[test]
    fn ridge_hand_values() {
        assert_eq!(loss_ridge_sum(&[1.0], 3.0, &[3.0]).unwrap(), 0.0);
        assert_eq!(grad_ridge_sum(&[1.0], 3.0, &[3.0]).unwrap().as_slice(), &[0.0]);
        // t = y - x = 1: g'(1) = 6/4 + 0.02
        let g = grad_ridge_sum(&[1.0], 1.0, &[0.0]).unwrap();
        assert!((g[0] + 1.52).abs() < 1e-15);
        assert!((loss_ridge_sum(&[1.0], 1.0, &[0.0]).unwrap() - 0.51).abs() < 1e-15);
    }

    #[test]
    fn logistic_at_origin_and_large_margin() {
        let w = [0.3, -2.0];
        for y in [-1.0, 1.0] {
            assert!((loss_logistic(&w, y, &[0.0, 0.0]).unwrap() - 2f64.ln()).abs() < 1e-15);
            let g = grad_logistic(&w, y, &[0.0, 0.0]).unwrap();
            assert!((g[0] + y * 0.15).abs() < 1e-15);
            assert!((g[1] - y * 1.0).abs() < 1e-15);
        }
        let big = loss_logistic(&[1.0], 1.0, &[50.0]).unwrap();
        assert!((big - (-50f64).exp()).abs() < 1e-30);
        let huge = loss_logistic(&[1.0], -1.0, &[1e6]).unwrap();
        assert_eq!(huge, 1e6);
    }

    #[test]
    fn logistic_rejects_non_binary_target() {
        assert!(matches!(loss_logistic(&[1.0], 0.5, &[1.0]), Err(Error::Data(_))));
    }

    #[test]
    fn poisson_at_origin() {
        let w = [2.0, -1.0];
        for y in [0.0, 0.5, 3.0] {
            assert!((loss_poisson(&w, y, &[0.0, 0.0]).unwrap() - 2f64.ln()).abs() < 1e-15);
            let g = grad_poisson(&w, y, &[0.0, 0.0]).unwrap();
            assert!((g[0] - 2.0 * (1.0 - y) / 2.0).abs() < 1e-15);
            assert!((g[1] + (1.0 - y) / 2.0).abs() < 1e-15);
        }
        assert_eq!(grad_poisson(&[4.0], 0.0, &[0.0]).unwrap().as_slice(), &[2.0]);
    }

    #[test]
    fn poisson_large_margin_is_finite() {
        let v = loss_poisson(&[1.0], 2.0, &[800.0]).unwrap();
        assert!((v - 800.0).abs() < 1e-9);
        let g = grad_poisson(&[1.0], 2.0, &[800.0]).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn poisson_domain_violation() {
        // y = -1, t = -10: a = -10 + 1 + e^-10 < 0
        let err = loss_poisson(&[1.0], -1.0, &[-10.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        // y = 5 exceeds the globally-safe range: a(ln 5) = 1 + 5 - 5 ln 5 < 0
        assert!(loss_poisson(&[1.0], 5.0, &[5f64.ln()]).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            loss_linear(&[1.0], 0.0, &[1.0, 2.0]),
            Err(Error::Dimension { .. })
        ));
    }
}
