//! The Lyapunov sequence T_k along a run: monotone for full-batch
//! AdaSGD-I, monotone up to the noise term with minibatches.
//!
//! cargo run --release --example lyapunov_descent

use adasgd::diagnostics::{check_step_conditions, lyapunov_descent_violations};
use adasgd::harness::fixtures;
use adasgd::optimizer::{run, run_full_batch, RunConfig, ValueCadence};
use adasgd::problems::{default_tolerance, solve_reference, DEFAULT_MAX_ITER};
use adasgd::sampling::RngStream;
use adasgd::stepsize::{PolicyConfig, PolicyKind};

fn main() -> adasgd::Result<()> {
    let problem = fixtures::synthetic_linear(7).build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;
    let policy = PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3);

    let full = run_full_batch(
        &problem,
        RunConfig::new(policy.clone(), 500.0, 1, RngStream::new(0, 0)).with_reference(reference.clone()),
    )?;
    let series = full.lyapunov_series();
    println!(
        "full batch: {} iterations, stopped with {}",
        full.state.k,
        full.status.label()
    );
    for &(k, t) in series.iter().filter(|(k, _)| k.is_power_of_two()) {
        println!("  k = {k:>4}  T_k = {t:.6e}");
    }
    println!(
        "  increases of T_k: {}",
        lyapunov_descent_violations(&series, 1e-10).len()
    );

    let mini = run(
        &problem,
        RunConfig::new(policy, 20.0, 16, RngStream::new(0, 1))
            .with_reference(reference)
            .with_cadence(ValueCadence::Never),
    )?;
    let mut rises = 0;
    let mut covered = 0;
    let snaps: Vec<_> = mini.snapshots().collect();
    for w in snaps.windows(2) {
        let (prev, curr) = (w[0].1, w[1].1);
        if curr.t_k > prev.t_k {
            rises += 1;
            covered += usize::from(curr.t_k <= prev.t_k + curr.noise_term.unwrap_or(0.0));
        }
    }
    let conditions = check_step_conditions(&mini.trace, PolicyKind::AdaSgdI, 0.01);
    println!(
        "minibatch 16: {} steps, T_k rose {rises} times, {covered} of them within the noise term; conditions hold: {}",
        mini.state.k,
        conditions.all_hold()
    );
    Ok(())
}
