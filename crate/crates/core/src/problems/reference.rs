use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{LossKind, Objective};
use crate::stepsize::{adagd_det_step, first_adaptive_step, local_lipschitz_estimate, PolicyState, ADAGD_FACTOR};
use crate::vector::{norm, ParamVector};

pub const DEFAULT_MAX_ITER: u64 = 1_000_000;

/// Initial step of the deterministic refinement.
const REFINE_LAMBDA0: f64 = 1e-3;

/// A numerically certified minimizer, used to report `f(x_k) - f*` and to
/// evaluate Lyapunov quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSolution {
    pub x_star: ParamVector,
    pub f_star: f64,
    pub grad_norm_at_xstar: f64,
    pub method: String,
}

pub fn default_tolerance(kind: LossKind) -> f64 {
    match kind {
        LossKind::Linear | LossKind::RidgeSum => 1e-10,
        LossKind::Logistic | LossKind::Poisson => 1e-8,
    }
}

/// Computes `x*` and `f*`.
///
/// Objectives with a closed-form minimizer (least squares via SVD, the
/// quadratic fixture) start there; everything is then polished with
/// full-batch adaptive gradient descent until `‖∇f(x)‖ <= tol`.
/// On failure the error carries the best point seen.
pub fn solve_reference(problem: &dyn Objective, tol: f64, max_iter: u64) -> Result<ReferenceSolution> {
    if !(tol > 0.0) {
        return Err(Error::Config(format!(
            "reference tolerance must be positive, got {tol}"
        )));
    }
    let (x0, method) = match problem.exact_minimizer() {
        Some((x, m)) => (x, m.to_string()),
        None => (ParamVector::zeros(problem.dim()), String::new()),
    };

    let mut x = x0;
    let mut g = problem.full_grad(&x)?;
    let mut best = (norm(&g), x.clone());
    let finish = |x: ParamVector, gnorm: f64, method: String| -> Result<ReferenceSolution> {
        Ok(ReferenceSolution {
            f_star: problem.full_value(&x)?,
            x_star: x,
            grad_norm_at_xstar: gnorm,
            method,
        })
    };
    if best.0 <= tol {
        return finish(x, best.0, method);
    }
    let method = if method.is_empty() {
        "adagd".to_string()
    } else {
        format!("{method}+adagd")
    };

    let mut state = PolicyState::default();
    let mut prev: Option<(ParamVector, ParamVector)> = None;
    let mut lambda = REFINE_LAMBDA0;
    for k in 0..max_iter {
        if let Some((xp, gp)) = &prev {
            let l_hat = local_lipschitz_estimate(&g, gp, &x, xp)?;
            if x == *xp {
                break;
            }
            lambda = if k == 1 {
                first_adaptive_step(l_hat, ADAGD_FACTOR, REFINE_LAMBDA0)
            } else {
                adagd_det_step(&mut state, l_hat, k)?
            };
        }
        state.push(lambda);
        let mut next = x.clone();
        next.axpy(-lambda, &g)?;
        if !next.is_finite() {
            break;
        }
        let g_next = problem.full_grad(&next)?;
        prev = Some((std::mem::replace(&mut x, next), std::mem::replace(&mut g, g_next)));
        let gn = norm(&g);
        if gn < best.0 {
            best = (gn, x.clone());
        }
        if gn <= tol {
            return finish(x, gn, method);
        }
    }
    let best = finish(best.1, best.0, method)?;
    Err(Error::ReferenceFailure {
        iterations: max_iter,
        best: Box::new(best),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Dataset, Problem};

    #[test]
    fn one_dimensional_least_squares() {
        let ds = Dataset::from_rows("1d", &[vec![1.0], vec![2.0]], vec![1.0, 2.0]).unwrap();
        let p = Problem::new(ds, LossKind::Linear).unwrap();
        let r = solve_reference(&p, 1e-10, 100).unwrap();
        assert!((r.x_star[0] - 1.0).abs() < 1e-12);
        assert!(r.f_star.abs() < 1e-24);
        assert_eq!(r.method, "normal-equations");
    }

    #[test]
    fn logistic_reference_by_adagd() {
        // overlapping classes: finite minimizer
        let rows = vec![
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            vec![-1.0, 1.0],
            vec![0.5, 1.0],
            vec![-2.0, 1.0],
        ];
        let ds = Dataset::from_rows("overlap", &rows, vec![1.0, 1.0, -1.0, -1.0, 1.0]).unwrap();
        let p = Problem::new(ds, LossKind::Logistic).unwrap();
        let r = solve_reference(&p, 1e-8, 100_000).unwrap();
        assert!(r.grad_norm_at_xstar <= 1e-8);
        assert!(r.f_star <= p.full_value(&[0.0, 0.0]).unwrap());
        assert_eq!(r.method, "adagd");
    }

    #[test]
    fn separable_logistic_reports_failure_with_best_point() {
        let rows = vec![vec![1.0], vec![2.0], vec![-1.0], vec![-3.0]];
        let ds = Dataset::from_rows("sep", &rows, vec![1.0, 1.0, -1.0, -1.0]).unwrap();
        let p = Problem::new(ds, LossKind::Logistic).unwrap();
        match solve_reference(&p, 1e-12, 20) {
            Err(Error::ReferenceFailure { best, .. }) => {
                assert!(best.grad_norm_at_xstar > 1e-12);
                assert!(best.x_star[0] > 0.0);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let ds = Dataset::from_rows("1d", &[vec![1.0]], vec![1.0]).unwrap();
        let p = Problem::new(ds, LossKind::Linear).unwrap();
        assert!(matches!(solve_reference(&p, 0.0, 10), Err(Error::Config(_))));
    }
}
