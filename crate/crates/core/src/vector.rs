//! Dense parameter vectors and the handful of BLAS-1 style kernels the
//! optimizer needs.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense vector of model parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// `self - other`, entrywise.
    pub fn sub(&self, other: &[f64]) -> Result<ParamVector> {
        check_dims(self, other)?;
        Ok(Self(self.0.iter().zip(other).map(|(a, b)| a - b).collect()))
    }

    /// In-place `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &[f64]) -> Result<()> {
        check_dims(self, other)?;
        for (a, b) in self.0.iter_mut().zip(other) {
            *a += alpha * b;
        }
        Ok(())
    }
}

impl Deref for ParamVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for ParamVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

pub fn dot(a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).sum())
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// `‖a - b‖`.
pub fn dist(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok(dist_sq(a, b)?.sqrt())
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&[1.0, 2.0], &[3.0, 4.0]).unwrap(), 11.0);
        assert_eq!(dot(&[0.0, 0.0], &[5.0, -7.0]).unwrap(), 0.0);
        assert_eq!(dot(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn dot_rejects_length_mismatch() {
        assert!(matches!(
            dot(&[1.0], &[1.0, 2.0]),
            Err(Error::Dimension { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&[3.0, 4.0]), 5.0);
        assert_eq!(norm(&[0.0; 7]), 0.0);
        assert_eq!(norm(&[-1.0]), 1.0);
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1e3..1e3f64, 3)
    }

    proptest! {
        #[test]
        fn dot_is_bilinear_and_symmetric(a in vec3(), b in vec3(), c in vec3(), s in -10.0..10.0f64) {
            let ab = dot(&a, &b).unwrap();
            prop_assert_eq!(ab, dot(&b, &a).unwrap());
            let sa_c: Vec<f64> = a.iter().zip(&c).map(|(x, z)| s * x + z).collect();
            let lhs = dot(&sa_c, &b).unwrap();
            let rhs = s * ab + dot(&c, &b).unwrap();
            let scale = 1.0 + norm(&a) * norm(&b) * s.abs() + norm(&c) * norm(&b);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn norm_triangle_inequality(a in vec3(), b in vec3()) {
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            prop_assert!(norm(&sum) <= (norm(&a) + norm(&b)) * (1.0 + 1e-12));
        }
    }
}
