//! Finite-sum objectives: the four regression losses, the separable
//! quadratic fixture, and reference-solution computation.

mod dataset;
mod loss;
mod objective;
mod reference;

pub use dataset::Dataset;
pub use loss::{
    grad_linear, grad_logistic, grad_poisson, grad_ridge_sum, loss_linear, loss_logistic, loss_poisson, loss_ridge_sum,
    ridge_profile, ridge_profile_slope, sigmoid, softplus, LossKind, RIDGE_QUADRATIC_WEIGHT,
};
pub use objective::{Objective, Problem, QuadraticFixture};
pub use reference::{default_tolerance, solve_reference, ReferenceSolution, DEFAULT_MAX_ITER};
