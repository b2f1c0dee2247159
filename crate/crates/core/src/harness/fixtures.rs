//! The benchmark problems at desk scale.

use crate::data::{DatasetKind, DatasetSpec, DEFAULT_MOONS_NOISE};
use crate::error::Result;
use crate::harness::ProblemSpec;
use crate::problems::{LossKind, QuadraticFixture};

pub const SYNTHETIC_N: usize = 200;
pub const SYNTHETIC_D: usize = 20;
pub const MOONS_N: usize = 200;
/// Poisson targets are folded into `[0, 3.5]`, where the loss is finite
/// at every parameter value.
pub const POISSON_TARGET_CAP: f64 = 3.5;

pub fn synthetic_linear(seed: u64) -> ProblemSpec {
    ProblemSpec {
        loss: LossKind::Linear,
        dataset: DatasetSpec::synthetic(SYNTHETIC_N, SYNTHETIC_D, seed),
    }
}

pub fn synthetic_ridge(seed: u64) -> ProblemSpec {
    ProblemSpec {
        loss: LossKind::RidgeSum,
        dataset: DatasetSpec::synthetic(SYNTHETIC_N, SYNTHETIC_D, seed),
    }
}

pub fn moons_logistic(seed: u64) -> ProblemSpec {
    ProblemSpec {
        loss: LossKind::Logistic,
        dataset: DatasetSpec::two_moons(MOONS_N, DEFAULT_MOONS_NOISE, seed),
    }
}

pub fn synthetic_poisson(seed: u64) -> ProblemSpec {
    let mut dataset = DatasetSpec::synthetic(SYNTHETIC_N, SYNTHETIC_D, seed);
    dataset.fold_targets = Some(POISSON_TARGET_CAP);
    ProblemSpec {
        loss: LossKind::Poisson,
        dataset,
    }
}

/// The four loss families on their default data.
pub fn all_problems(seed: u64) -> Vec<ProblemSpec> {
    vec![
        synthetic_linear(seed),
        synthetic_ridge(seed),
        moons_logistic(seed),
        synthetic_poisson(seed),
    ]
}

/// Diagonal quadratic finite sum with Hessian eigenvalues in `[mu, l]`,
/// spread evenly over `d` coordinates.
pub fn diagonal_quadratic(mu: f64, l: f64, d: usize, n: usize, spread: f64, seed: u64) -> Result<QuadraticFixture> {
    let curvatures = if d == 1 {
        vec![mu]
    } else {
        (0..d).map(|j| mu + (l - mu) * j as f64 / (d - 1) as f64).collect()
    };
    QuadraticFixture::random(curvatures, n, spread, seed)
}

pub fn is_file_backed(spec: &ProblemSpec) -> bool {
    matches!(spec.dataset.kind, DatasetKind::LibsvmFile | DatasetKind::CsvFile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Objective;

    #[test]
    fn fixtures_build_and_evaluate() {
        for spec in all_problems(1) {
            let p = spec.build().unwrap();
            let f0 = p.full_value(&vec![0.0; p.dim()]).unwrap();
            assert!(f0.is_finite(), "{}", p.name());
        }
    }

    #[test]
    fn poisson_targets_stay_in_the_safe_range() {
        let p = synthetic_poisson(3).build().unwrap();
        assert!(p
            .dataset()
            .targets()
            .iter()
            .all(|&y| (0.0..=POISSON_TARGET_CAP).contains(&y)));
        let far = vec![-40.0; p.dim()];
        assert!(p.full_value(&far).is_ok());
    }

    #[test]
    fn quadratic_extremes() {
        let q = diagonal_quadratic(0.1, 10.0, 5, 16, 1.0, 0).unwrap();
        assert_eq!((q.mu(), q.lipschitz()), (0.1, 10.0));
    }
}
