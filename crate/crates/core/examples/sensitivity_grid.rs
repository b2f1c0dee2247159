//! The λ₀ sensitivity grid from a TOML config, written to disk and
//! summarized.
//!
//! cargo run --release --example sensitivity_grid -- [config.toml] [out-dir]

use std::path::PathBuf;

use adasgd::harness::{report, run_sensitivity, ExperimentSpec, Format, OutputDir};

fn main() -> adasgd::Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args.next().map_or_else(
        || PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/synthetic_linear.toml"),
        PathBuf::from,
    );
    let spec = ExperimentSpec::from_file(&config)?;
    let out = args.next().map_or_else(
        || std::env::temp_dir().join(format!("adasgd-{}", spec.name)),
        PathBuf::from,
    );
    let problem = spec.problem.build()?;

    let dir = OutputDir::create(&out)?;
    let grid = run_sensitivity(&spec, &problem, None, Some(&dir))?;
    let summary = report(&out, Format::Csv)?;

    print!("{:<12}", "lambda0");
    for alg in &spec.algorithms {
        print!(" {:>11}", alg.kind().name());
    }
    println!();
    for (gi, l0) in spec.lambda0_grid.iter().enumerate() {
        print!("{l0:<12.1e}");
        for alg in &spec.algorithms {
            let cell = grid
                .cells_for(alg.kind())
                .find(|c| c.grid_index == gi && c.replicate == 0);
            match cell.and_then(|c| c.final_f) {
                Some(f) => print!(" {f:>11.4e}"),
                None => print!(" {:>11}", cell.map_or("-", |c| c.status.label())),
            }
        }
        println!();
    }
    println!(
        "{} failed cells; wrote {} to {}",
        summary.failed_cells,
        summary.files.join(", "),
        out.display()
    );
    Ok(())
}
