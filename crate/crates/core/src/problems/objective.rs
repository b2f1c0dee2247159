use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::problems::{Dataset, LossKind};
use crate::sampling::MinibatchIndex;
use crate::vector::{dot, ParamVector};

/// A finite-sum objective `f = (1/N) sum_l f_l` with per-sample oracles.
///
/// Implementations are immutable; gradient-evaluation accounting belongs
/// to whoever drives the oracle.
pub trait Objective: Send + Sync {
    fn name(&self) -> String;

    fn n_samples(&self) -> usize;

    fn dim(&self) -> usize;

    fn sample_value(&self, i: usize, x: &[f64]) -> Result<f64>;

    /// Accumulates `scale * grad f_i(x)` into `out`.
    fn add_sample_grad(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) -> Result<()>;

    /// A minimizer known without iterating, if the objective admits one.
    fn exact_minimizer(&self) -> Option<(ParamVector, &'static str)> {
        None
    }

    /// Mean of the per-sample gradients over `batch`.
    fn minibatch_grad(&self, batch: &MinibatchIndex, x: &[f64]) -> Result<ParamVector> {
        self.check_point(x)?;
        let mut g = ParamVector::zeros(self.dim());
        let scale = 1.0 / batch.len() as f64;
        for &i in batch.indices() {
            self.add_sample_grad(i, x, scale, &mut g)?;
        }
        Ok(g)
    }

    fn minibatch_value(&self, batch: &MinibatchIndex, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let mut total = 0.0;
        for &i in batch.indices() {
            total += self.sample_value(i, x)?;
        }
        Ok(total / batch.len() as f64)
    }

    fn full_value(&self, x: &[f64]) -> Result<f64> {
        self.minibatch_value(&MinibatchIndex::full(self.n_samples()), x)
    }

    fn full_grad(&self, x: &[f64]) -> Result<ParamVector> {
        self.minibatch_grad(&MinibatchIndex::full(self.n_samples()), x)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// A dataset paired with one of the four regression losses.
#[derive(Clone, Debug)]
pub struct Problem {
    dataset: Arc<Dataset>,
    kind: LossKind,
}

impl Problem {
    pub fn new(dataset: impl Into<Arc<Dataset>>, kind: LossKind) -> Result<Self> {
        let dataset = dataset.into();
        if kind == LossKind::Logistic && !dataset.is_binary() {
            return Err(Error::Data(format!(
                "logistic regression on '{}' needs targets in {{-1, +1}}",
                dataset.name
            )));
        }
        Ok(Self { dataset, kind })
    }

    pub fn dataset(&self) -> &Dataset {
        &self.dataset
    }

    pub fn kind(&self) -> LossKind {
        self.kind
    }

    fn margin(&self, i: usize, x: &[f64]) -> Result<(f64, f64)> {
        let w = self.dataset.row(i);
        let t = dot(w, x)?;
        self.kind
            .margin_value_and_slope(t, self.dataset.target(i))
            .map_err(|e| match e {
                Error::Domain { message, .. } => Error::Domain { sample: i, message },
                other => other,
            })
    }

    /// Minimum-norm least-squares solution via SVD.
    fn least_squares(&self) -> Option<ParamVector> {
        let ds = &self.dataset;
        let a = DMatrix::from_row_slice(ds.n_samples(), ds.dim(), ds.features());
        let b = DVector::from_column_slice(ds.targets());
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        let eps = smax * 1e-12 * ds.n_samples().max(ds.dim()) as f64;
        let x = svd.solve(&b, eps).ok()?;
        Some(ParamVector::new(x.iter().copied().collect()))
    }
}

impl Objective for Problem {
    fn name(&self) -> String {
        format!("{}/{}", self.kind.name(), self.dataset.name)
    }

    fn n_samples(&self) -> usize {
        self.dataset.n_samples()
    }

    fn dim(&self) -> usize {
        self.dataset.dim()
    }

    fn sample_value(&self, i: usize, x: &[f64]) -> Result<f64> {
        Ok(self.margin(i, x)?.0)
    }

    fn add_sample_grad(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) -> Result<()> {
        let slope = self.margin(i, x)?.1 * scale;
        for (o, w) in out.iter_mut().zip(self.dataset.row(i)) {
            *o += slope * w;
        }
        Ok(())
    }

    fn exact_minimizer(&self) -> Option<(ParamVector, &'static str)> {
        match self.kind {
            LossKind::Linear => self.least_squares().map(|x| (x, "normal-equations")),
            _ => None,
        }
    }
}

/// Separable quadratic finite sum
/// `f_l(x) = 1/2 sum_j h_j (x_j - c_lj)^2`.
///
/// Every `f_l` shares the Hessian `diag(h)`, so each one is
/// `min h`-strongly convex with `max h`-Lipschitz gradient. When all
/// centers coincide the problem interpolates: `x*` minimizes every `f_l`.
#[derive(Clone, Debug)]
pub struct QuadraticFixture {
    curvatures: Vec<f64>,
    centers: Vec<f64>,
    n: usize,
}

impl QuadraticFixture {
    pub fn new(curvatures: Vec<f64>, centers: Vec<Vec<f64>>) -> Result<Self> {
        let d = curvatures.len();
        if d == 0 || centers.is_empty() {
            return Err(Error::Config("quadratic fixture needs d >= 1 and N >= 1".into()));
        }
        if curvatures.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::Config("curvatures must be positive and finite".into()));
        }
        if let Some(c) = centers.iter().find(|c| c.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                found: c.len(),
            });
        }
        Ok(Self {
            curvatures,
            n: centers.len(),
            centers: centers.concat(),
        })
    }

    /// Centers drawn i.i.d. `N(0, spread^2)` per coordinate.
    pub fn random(curvatures: Vec<f64>, n: usize, spread: f64, seed: u64) -> Result<Self> {
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = curvatures.len();
        let centers = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        spread * z
                    })
                    .collect()
            })
            .collect();
        Self::new(curvatures, centers)
    }

    pub fn mu(&self) -> f64 {
        self.curvatures.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn lipschitz(&self) -> f64 {
        self.curvatures.iter().copied().fold(0.0, f64::max)
    }

    pub fn center(&self, i: usize) -> &[f64] {
        let d = self.curvatures.len();
        &self.centers[i * d..(i + 1) * d]
    }
}

impl Objective for QuadraticFixture {
    fn name(&self) -> String {
        format!("quadratic/mu={}/L={}", self.mu(), self.lipschitz())
    }

    fn n_samples(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.curvatures.len()
    }

    fn sample_value(&self, i: usize, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(0.5
            * self
                .curvatures
                .iter()
                .zip(x.iter().zip(self.center(i)))
                .map(|(h, (xj, cj))| h * (xj - cj) * (xj - cj))
                .sum::<f64>())
    }

    fn add_sample_grad(&self, i: usize, x: &[f64], scale: f64, out: &mut [f64]) -> Result<()> {
        for (j, o) in out.iter_mut().enumerate() {
            *o += scale * self.curvatures[j] * (x[j] - self.centers[i * x.len() + j]);
        }
        Ok(())
    }

    fn exact_minimizer(&self) -> Option<(ParamVector, &'static str)> {
        let d = self.dim();
        let mut mean = vec![0.0; d];
        for i in 0..self.n {
            for (m, c) in mean.iter_mut().zip(self.center(i)) {
                *m += c;
            }
        }
        for m in &mut mean {
            *m /= self.n as f64;
        }
        Some((ParamVector::new(mean), "closed-form"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::norm;

    fn tiny() -> Problem {
        let ds = Dataset::from_rows("tiny", &[vec![1.0], vec![2.0]], vec![1.0, 2.0]).unwrap();
        Problem::new(ds, LossKind::Linear).unwrap()
    }

    #[test]
    fn full_index_batch_equals_full_gradient() {
        let p = tiny();
        let x = [0.3];
        let full = p.full_grad(&x).unwrap();
        let batch = p.minibatch_grad(&MinibatchIndex::full(2), &x).unwrap();
        assert_eq!(full, batch);
    }

    #[test]
    fn duplicated_index_batch_is_per_sample_gradient() {
        let p = tiny();
        let x = [0.3];
        let b = MinibatchIndex::new(vec![1, 1, 1], 2).unwrap();
        let g = p.minibatch_grad(&b, &x).unwrap();
        let per = crate::problems::grad_linear(&[2.0], 2.0, &x).unwrap();
        assert!((g[0] - per[0]).abs() < 1e-15);
    }

    #[test]
    fn least_squares_minimizer() {
        let (x, method) = tiny().exact_minimizer().unwrap();
        assert_eq!(method, "normal-equations");
        assert!((x[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_least_squares_is_minimum_norm() {
        // duplicated column: any (a, b) with a + b = 1 fits exactly
        let ds = Dataset::from_rows("dup", &[vec![1.0, 1.0], vec![2.0, 2.0]], vec![1.0, 2.0]).unwrap();
        let p = Problem::new(ds, LossKind::Linear).unwrap();
        let (x, _) = p.exact_minimizer().unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
        assert!(norm(&p.full_grad(&x).unwrap()) < 1e-12);
    }

    #[test]
    fn logistic_requires_binary_targets() {
        let ds = Dataset::from_rows("bad", &[vec![1.0]], vec![0.0]).unwrap();
        assert!(Problem::new(ds, LossKind::Logistic).is_err());
    }

    #[test]
    fn domain_error_carries_sample_index() {
        let ds = Dataset::from_rows("p", &[vec![1.0], vec![1.0]], vec![0.0, -1.0]).unwrap();
        let p = Problem::new(ds, LossKind::Poisson).unwrap();
        match p.full_value(&[-10.0]) {
            Err(Error::Domain { sample, .. }) => assert_eq!(sample, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadratic_fixture_minimizer_zeroes_gradient() {
        let q = QuadraticFixture::random(vec![0.1, 10.0], 16, 1.0, 3).unwrap();
        let (x, _) = q.exact_minimizer().unwrap();
        assert!(norm(&q.full_grad(&x).unwrap()) < 1e-12);
        assert_eq!(q.mu(), 0.1);
        assert_eq!(q.lipschitz(), 10.0);
    }
}
