//! Stochastic gradient descent with step sizes adapted to local
//! curvature estimates, together with the baselines, the Lyapunov
//! diagnostics and a seeded benchmark harness.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod data;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod optimizer;
pub mod problems;
pub mod sampling;
pub mod stepsize;
pub mod vector;

pub use error::{Error, Result};
