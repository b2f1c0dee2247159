//! A fast self-check of the invariants, run by `adasgd verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{gen_synthetic_gaussian, parse_libsvm, write_libsvm};
use crate::diagnostics::{check_step_conditions, lemma2_check, lemma34_check, lyapunov_descent_violations};
use crate::error::Result;
use crate::harness::fixtures;
use crate::optimizer::{run, run_full_batch, RunConfig};
use crate::problems::{default_tolerance, solve_reference, Objective, DEFAULT_MAX_ITER};
use crate::sampling::{sample_minibatch, RngStream};
use crate::stepsize::{PolicyConfig, PolicyKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

/// Largest coordinate gap between the analytic gradient of sample `i` and
/// its central finite difference with step `h`.
pub fn gradient_error(problem: &dyn Objective, i: usize, x: &[f64], h: f64) -> Result<f64> {
    let mut analytic = vec![0.0; problem.dim()];
    problem.add_sample_grad(i, x, 1.0, &mut analytic)?;
    let mut probe = x.to_vec();
    let mut worst = 0.0f64;
    for j in 0..x.len() {
        probe[j] = x[j] + h;
        let up = problem.sample_value(i, &probe)?;
        probe[j] = x[j] - h;
        let down = problem.sample_value(i, &probe)?;
        probe[j] = x[j];
        worst = worst.max(((up - down) / (2.0 * h) - analytic[j]).abs());
    }
    Ok(worst)
}

fn gaussian_point(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Runs the suite; `seed` fixes every random choice.
pub fn verify_suite(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut worst = 0.0f64;
    for spec in fixtures::all_problems(seed) {
        let p = spec.build()?;
        for _ in 0..25 {
            let x = gaussian_point(&mut rng, p.dim(), 0.3);
            let i = rng.random_range(0..p.n_samples() as u64) as usize;
            worst = worst.max(gradient_error(&p, i, &x, 1e-6)?);
        }
    }
    out.push(CheckOutcome::new(
        "gradient-oracles",
        worst <= 1e-5,
        format!("max abs error {worst:.3e}"),
    ));

    let linear = fixtures::synthetic_linear(seed).build()?;
    let reference = solve_reference(&linear, default_tolerance(linear.kind()), DEFAULT_MAX_ITER)?;
    let cfg = RunConfig::new(
        PolicyConfig::new(PolicyKind::AdaSgdI, 1e-3),
        500.0,
        1,
        RngStream::new(seed, 0),
    )
    .with_reference(reference.clone());
    let outcome = run_full_batch(&linear, cfg)?;
    let bad = lyapunov_descent_violations(&outcome.lyapunov_series(), 1e-10);
    out.push(CheckOutcome::new(
        "lyapunov-descent",
        bad.is_empty() && !outcome.status.is_failure(),
        format!("{} iterations, {} increases", outcome.records.len(), bad.len()),
    ));

    let mut violations = 0;
    let mut checked = 0;
    for spec in fixtures::all_problems(seed) {
        let p = spec.build()?;
        for kind in [PolicyKind::AdaSgdI, PolicyKind::AdaSgdII, PolicyKind::AdaSgdIII] {
            for rep in 0..2 {
                let stream = RngStream::for_cell(seed, kind as u64, 0, rep);
                let o = run(&p, RunConfig::new(PolicyConfig::new(kind, 1e-3), 10.0, 32, stream))?;
                let r = check_step_conditions(&o.trace, kind, 0.01);
                violations += r.cond1_violations + r.cond2_violations + r.damped_violations;
                checked += r.checked;
            }
        }
    }
    out.push(CheckOutcome::new(
        "step-conditions",
        violations == 0,
        format!("{violations} violations in {checked} steps"),
    ));

    let q = fixtures::diagonal_quadratic(0.1, 10.0, 2, 100, 1.0, seed)?;
    let o = run(
        &q,
        RunConfig::new(
            PolicyConfig::new(PolicyKind::AdaSgdIII, 1e-3),
            20.0,
            1,
            RngStream::new(seed, 1),
        ),
    )?;
    let bounds = lemma34_check(&o.lambdas(), q.mu(), q.lipschitz(), 0.01)?;
    out.push(CheckOutcome::new(
        "step-bounds",
        bounds.total_violations() == 0 && bounds.checked > 0,
        format!("{} violations in {} steps", bounds.total_violations(), bounds.checked),
    ));

    let mut lemma2_bad = 0;
    for _ in 0..1000 {
        let x = gaussian_point(&mut rng, linear.dim(), 1.0);
        let b1 = sample_minibatch(&mut rng, linear.n_samples(), 32)?;
        let b2 = sample_minibatch(&mut rng, linear.n_samples(), 32)?;
        lemma2_bad += usize::from(!lemma2_check(&linear, &x, &reference, (&b1, &b2))?.satisfied);
    }
    out.push(CheckOutcome::new(
        "gradient-gap-bound",
        lemma2_bad == 0,
        format!("{lemma2_bad} violations in 1000 draws"),
    ));

    let ds = gen_synthetic_gaussian(seed, 200, 8)?;
    let dir = std::env::temp_dir().join(format!("adasgd-verify-{}-{seed}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("roundtrip.svm");
    let labelled = crate::problems::Dataset::new(
        "roundtrip",
        ds.dim(),
        ds.features().to_vec(),
        ds.targets().iter().map(|&y| if y > 0.0 { 1.0 } else { -1.0 }).collect(),
    )?;
    write_libsvm(&labelled, &path)?;
    let back = parse_libsvm(&path, Some(ds.dim()))?;
    let _ = std::fs::remove_dir_all(&dir);
    out.push(CheckOutcome::new(
        "libsvm-round-trip",
        back.features() == labelled.features() && back.targets() == labelled.targets(),
        format!("{} rows", back.n_samples()),
    ));
    Ok(out)
}
