//! The weighted average x̂_K under the objective-aware step rule: every
//! weight is non-negative and S_K (f(x̂_K) - f*) stays bounded.
//!
//! cargo run --release --example averaged_iterate

use adasgd::harness::fixtures;
use adasgd::optimizer::{averaged_iterate, run, RunConfig, ValueCadence};
use adasgd::problems::{default_tolerance, solve_reference, Objective, DEFAULT_MAX_ITER};
use adasgd::sampling::RngStream;
use adasgd::stepsize::{PolicyConfig, PolicyKind};

fn main() -> adasgd::Result<()> {
    let problem = fixtures::synthetic_linear(7).build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;
    let policy = PolicyConfig::new(PolicyKind::ConvexOracle, 1e-3).with_f_star(reference.f_star);
    let cfg = RunConfig::new(policy, 5_001.0 * 32.0 / 200.0, 32, RngStream::new(0, 0))
        .with_cadence(ValueCadence::Never)
        .keep_history();
    let outcome = run(&problem, cfg)?;
    let lambdas = outcome.lambdas();

    println!(
        "{:>6} {:>10} {:>14} {:>14} {:>14}",
        "K", "S_K", "f(x_K) - f*", "f(x̂_K) - f*", "S_K gap"
    );
    for k in [10, 100, 1_000, 5_000] {
        let avg = averaged_iterate(&lambdas, &outcome.iterates, k)?;
        let last = problem.full_value(&outcome.iterates[k])? - reference.f_star;
        let gap = problem.full_value(&avg.x_hat)? - reference.f_star;
        let min_w = avg.weights.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "{k:>6} {:>10.3e} {last:>14.4e} {gap:>14.4e} {:>14.4e}   min weight {min_w:.2e}",
            avg.s_k,
            avg.s_k * gap
        );
    }
    Ok(())
}
