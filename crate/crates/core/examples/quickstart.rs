//! Least squares on synthetic data with AdaSGD-III and no tuning.
//!
//! cargo run --release --example quickstart

use adasgd::harness::fixtures;
use adasgd::optimizer::{run, RunConfig};
use adasgd::problems::{default_tolerance, solve_reference, DEFAULT_MAX_ITER};
use adasgd::sampling::RngStream;
use adasgd::stepsize::{PolicyConfig, PolicyKind};

fn main() -> adasgd::Result<()> {
    let problem = fixtures::synthetic_linear(7).build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;

    let policy = PolicyConfig::new(PolicyKind::AdaSgdIII, 1e-3);
    let cfg = RunConfig::new(policy, 30.0, 32, RngStream::new(42, 0));
    let outcome = run(&problem, cfg)?;

    println!("f* = {:.6} ({})", reference.f_star, reference.method);
    println!("{:>6}  {:>12}", "epoch", "f - f*");
    for (epoch, f) in outcome.value_curve().iter().step_by(5) {
        println!("{epoch:>6.1}  {:>12.4e}", f - reference.f_star);
    }
    println!(
        "{} after {} iterations and {} sample gradients; last step {:.3e}",
        outcome.status.label(),
        outcome.state.k,
        outcome.state.grad_evals,
        outcome.lambdas().last().copied().unwrap_or(f64::NAN)
    );
    Ok(())
}
