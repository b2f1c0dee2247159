//! Step-by-step driving, checkpointing the state as JSON, and resuming
//! bit for bit.
//!
//! cargo run --release --example resume_run

use adasgd::harness::fixtures;
use adasgd::optimizer::{run, RunConfig, RunState, Runner};
use adasgd::sampling::RngStream;
use adasgd::stepsize::{PolicyConfig, PolicyKind};

fn main() -> adasgd::Result<()> {
    let problem = fixtures::synthetic_poisson(7).build()?;
    let cfg = RunConfig::new(
        PolicyConfig::new(PolicyKind::AdaSgdII, 1e-3),
        20.0,
        32,
        RngStream::new(3, 0),
    );

    let mut runner = Runner::new(&problem, cfg.clone())?;
    while runner.state().k < 50 {
        let (record, _) = runner.step().expect("no failure in the first 50 steps");
        if record.k % 10 == 0 {
            println!("k = {:>3}  lambda = {:.4e}", record.k, record.lambda);
        }
    }
    let checkpoint = serde_json::to_string(runner.state())?;
    println!("checkpoint at k = 50: {} bytes", checkpoint.len());

    let state: RunState = serde_json::from_str(&checkpoint)?;
    let resumed = Runner::resume(&problem, cfg.clone(), state)?.run_to_end();
    let straight = run(&problem, cfg)?;
    println!(
        "resumed to k = {}; identical to an uninterrupted run: {}",
        resumed.state.k,
        resumed.state == straight.state
    );
    Ok(())
}
