use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::problems::Dataset;

/// `N x d` standard-normal features, then `N` standard-normal targets,
/// all from one seeded stream.
pub fn gen_synthetic_gaussian(seed: u64, n: usize, d: usize) -> Result<Dataset> {
    if n == 0 || d == 0 {
        return Err(Error::Config(format!("synthetic data needs N, d >= 1 (got {n} x {d})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let features: Vec<f64> = (0..n * d).map(|_| StandardNormal.sample(&mut rng)).collect();
    let targets: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    Dataset::new(format!("synthetic-{n}x{d}"), d, features, targets)
}

/// Two interleaving half circles with a bias column.
///
/// The outer moon `(cos θ, sin θ)` is labelled -1, the inner moon
/// `(1 - cos θ, 0.5 - sin θ)` is labelled +1, with `θ` evenly spaced on
/// `[0, π]` and Gaussian jitter of standard deviation `noise`.
pub fn gen_two_moons(seed: u64, n: usize, noise: f64) -> Result<Dataset> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::Config(format!("two-moons needs an even, positive N (got {n})")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(Error::Config(format!("noise must be non-negative, got {noise}")));
    }
    let half = n / 2;
    let theta = |i: usize| {
        if half == 1 {
            0.0
        } else {
            PI * i as f64 / (half - 1) as f64
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, noise).map_err(|e| Error::Config(e.to_string()))?;

    let mut features = Vec::with_capacity(3 * n);
    let mut targets = Vec::with_capacity(n);
    for i in 0..half {
        let t = theta(i);
        features.extend([t.cos(), t.sin(), 1.0]);
        targets.push(-1.0);
    }
    for i in 0..half {
        let t = theta(i);
        features.extend([1.0 - t.cos(), 0.5 - t.sin(), 1.0]);
        targets.push(1.0);
    }
    if noise > 0.0 {
        for row in features.chunks_exact_mut(3) {
            row[0] += jitter.sample(&mut rng);
            row[1] += jitter.sample(&mut rng);
        }
    }
    Dataset::new(format!("two-moons-{n}"), 3, features, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_shape_and_determinism() {
        let a = gen_synthetic_gaussian(5, 200, 20).unwrap();
        assert_eq!((a.n_samples(), a.dim(), a.targets().len()), (200, 20, 200));
        let b = gen_synthetic_gaussian(5, 200, 20).unwrap();
        assert_eq!(a.features(), b.features());
        assert_eq!(a.targets(), b.targets());
        assert_ne!(gen_synthetic_gaussian(6, 200, 20).unwrap().features(), a.features());
    }

    #[test]
    fn gaussian_moments() {
        let ds = gen_synthetic_gaussian(11, 100_000, 10).unwrap();
        let m = ds.features().len() as f64;
        let mean = ds.features().iter().sum::<f64>() / m;
        let var = ds.features().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "variance {var}");
    }

    #[test]
    fn two_moons_geometry() {
        let ds = gen_two_moons(0, 200, 0.0).unwrap();
        assert_eq!(ds.row(0), &[1.0, 0.0, 1.0]);
        assert_eq!(ds.target(0), -1.0);
        assert!(ds.rows().all(|r| r[2] == 1.0));
        assert_eq!(ds.targets().iter().filter(|&&y| y == 1.0).count(), 100);
        assert_eq!(ds.targets().iter().filter(|&&y| y == -1.0).count(), 100);
        // inner moon at θ = 0
        assert_eq!(ds.row(100), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn two_moons_noise_keeps_bias_and_labels() {
        let ds = gen_two_moons(3, 50, 0.1).unwrap();
        assert!(ds.is_binary());
        assert!(ds.rows().all(|r| r[2] == 1.0));
        assert_eq!(ds.features(), gen_two_moons(3, 50, 0.1).unwrap().features());
    }

    #[test]
    fn two_moons_rejects_odd_n() {
        assert!(matches!(gen_two_moons(0, 201, 0.0), Err(Error::Config(_))));
    }
}
