//! Every step-size policy on the two-moons logistic problem, same start,
//! same initial step.
//!
//! cargo run --release --example step_policies -- [lambda0]

use adasgd::harness::fixtures;
use adasgd::optimizer::{run, RunConfig};
use adasgd::problems::{default_tolerance, solve_reference, DEFAULT_MAX_ITER};
use adasgd::sampling::RngStream;
use adasgd::stepsize::{PolicyConfig, PolicyKind};

fn main() -> adasgd::Result<()> {
    let lambda0: f64 = std::env::args()
        .nth(1)
        .map_or(Ok(1e-3), |s| s.parse())
        .expect("lambda0 must be a number");
    let problem = fixtures::moons_logistic(7).build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;

    println!("lambda0 = {lambda0:e}, f* = {:.6}", reference.f_star);
    println!(
        "{:<14} {:<16} {:>12} {:>12} {:>10}",
        "policy", "status", "f - f*", "last step", "grads"
    );
    for kind in PolicyKind::ALL {
        let mut policy = PolicyConfig::new(kind, lambda0);
        if kind == PolicyKind::ConvexOracle {
            policy = policy.with_f_star(reference.f_star);
        }
        let outcome = run(
            &problem,
            RunConfig::new(policy, 50.0, 32, RngStream::new(1, kind as u64)),
        )?;
        let gap = outcome.final_value.map(|f| f - reference.f_star);
        println!(
            "{:<14} {:<16} {:>12} {:>12.3e} {:>10}",
            kind.name(),
            outcome.status.label(),
            gap.map_or("-".into(), |g| format!("{g:.3e}")),
            outcome.lambdas().last().copied().unwrap_or(f64::NAN),
            outcome.state.grad_evals
        );
    }
    Ok(())
}
