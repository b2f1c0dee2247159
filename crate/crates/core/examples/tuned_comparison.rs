//! Grid-tuned baselines against AdaSGD at a fixed λ₀ = 1e-3.
//!
//! cargo run --release --example tuned_comparison

use std::collections::BTreeMap;

use adasgd::harness::{fixtures, run_performance, run_sensitivity, select_best_lambda0, ExperimentSpec};
use adasgd::problems::{default_tolerance, solve_reference, DEFAULT_MAX_ITER};

fn main() -> adasgd::Result<()> {
    let mut spec = ExperimentSpec::new("poisson", 42, fixtures::synthetic_poisson(7));
    spec.perf.replicates = 5;
    let problem = spec.problem.build()?;
    let reference = solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER)?;

    let grid = run_sensitivity(&spec, &problem, None, None)?;
    let mut tuned = BTreeMap::new();
    for alg in &spec.algorithms {
        let kind = alg.kind();
        if !kind.is_adasgd() {
            tuned.insert(kind, select_best_lambda0(&grid, kind)?);
        }
    }
    let perf = run_performance(&spec, &problem, &tuned, Some(&reference), None)?;

    println!("{:<12} {:>10} {:>18}", "policy", "lambda0", "median f - f*");
    for alg in &spec.algorithms {
        let kind = alg.kind();
        let l0 = tuned.get(&kind).copied().unwrap_or(spec.perf.adasgd_lambda0);
        let tag = if kind.is_adasgd() { "" } else { " (tuned)" };
        println!(
            "{:<12} {:>10.1e} {:>18.4e}{tag}",
            kind.name(),
            l0,
            perf.median_final(kind).unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
