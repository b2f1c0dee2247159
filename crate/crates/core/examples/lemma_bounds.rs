//! Step-size bounds for AdaSGD-III on a strongly convex quadratic, and the
//! gradient-gap inequality on random minibatch pairs.
//!
//! cargo run --release --example lemma_bounds

use adasgd::diagnostics::{lemma2_check, lemma34_check};
use adasgd::harness::fixtures;
use adasgd::optimizer::{run, RunConfig, ValueCadence};
use adasgd::problems::{default_tolerance, solve_reference, Objective, DEFAULT_MAX_ITER};
use adasgd::sampling::{sample_minibatch, RngStream};
use adasgd::stepsize::{PolicyConfig, PolicyKind, ADASGD_FACTOR};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> adasgd::Result<()> {
    let (mu, l, delta) = (0.1, 10.0, 0.01);
    let q = fixtures::diagonal_quadratic(mu, l, 4, 100, 1.0, 0)?;
    let cfg = RunConfig::new(
        PolicyConfig::new(PolicyKind::AdaSgdIII, 1e-3),
        100.0,
        1,
        RngStream::new(0, 0),
    )
    .with_cadence(ValueCadence::Never);
    let lambdas = run(&q, cfg)?.lambdas();
    let report = lemma34_check(&lambdas, mu, l, delta)?;
    println!("AdaSGD-III, mu = {mu}, L = {l}: {} steps checked", report.checked);
    for k in [2usize, 10, 100, 1_000, 9_999] {
        let kp = (k as f64).powf(0.5 + delta);
        println!(
            "  k = {k:>5}: {:.3e} <= lambda_k = {:.3e} <= {:.3e}",
            1.0 / (ADASGD_FACTOR * l * kp),
            lambdas[k],
            1.0 / (ADASGD_FACTOR * mu * kp)
        );
    }
    println!("  violations: {}", report.total_violations());

    let problem = fixtures::synthetic_linear(7).build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_ratio = 0.0f64;
    for _ in 0..2_000 {
        let x: Vec<f64> = (0..problem.dim()).map(|_| rng.sample(StandardNormal)).collect();
        let b1 = sample_minibatch(&mut rng, problem.n_samples(), 8)?;
        let b2 = sample_minibatch(&mut rng, problem.n_samples(), 8)?;
        let out = lemma2_check(&problem, &x, &reference, (&b1, &b2))?;
        worst_ratio = worst_ratio.max(out.lhs / out.rhs);
    }
    println!("gradient gap: largest lhs/rhs over 2000 draws = {worst_ratio:.3} (must stay <= 1)");
    Ok(())
}
