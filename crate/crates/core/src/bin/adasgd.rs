use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use adasgd::harness::{
    self, load_grid, output_root, report, run_performance, run_sensitivity, select_best_lambda0, ExperimentSpec,
    Format, Manifest, OutputDir,
};
use adasgd::optimizer::{run, RunConfig};
use adasgd::problems::{default_tolerance, solve_reference, DEFAULT_MAX_ITER};
use adasgd::sampling::RngStream;
use adasgd::stepsize::PolicyKind;
use adasgd::{Error, Result};

#[derive(Parser)]
#[command(name = "adasgd", version, about = "Adaptive SGD experiments")]
struct Cli {
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for grid and comparison runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value = "csv", value_parser = parse_format)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// One run, records to stdout as JSON lines.
    Run {
        config: PathBuf,
        /// Policy name; defaults to the first listed algorithm.
        #[arg(long)]
        algorithm: Option<PolicyKind>,
        #[arg(long, default_value_t = adasgd::stepsize::DEFAULT_LAMBDA0)]
        lambda0: f64,
        #[arg(long, default_value_t = 0)]
        replicate: u64,
        #[arg(long)]
        full_batch: bool,
    },
    /// λ₀ sensitivity grid.
    Grid {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tuned comparison; reuses grid cells in the output directory when present.
    Perf {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compacts an experiment directory into tables.
    Report { dir: PathBuf },
    /// Invariant self-check.
    Verify,
}

fn load(config: &Path, seed: Option<u64>) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::from_file(config)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    Ok(spec)
}

fn out_dir(spec: &ExperimentSpec, out: Option<PathBuf>) -> Result<OutputDir> {
    let dir = OutputDir::create(out.unwrap_or_else(|| output_root().join(&spec.name)))?;
    dir.write_manifest(&Manifest::for_spec(spec))?;
    Ok(dir)
}

fn main_inner(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            config,
            algorithm,
            lambda0,
            replicate,
            full_batch,
        } => {
            let spec = load(&config, cli.seed)?;
            let problem = spec.problem.build()?;
            let template = match algorithm {
                Some(k) => harness::AlgorithmTemplate::Name(k),
                None => spec.algorithms[0].clone(),
            };
            let policy = template.instantiate(lambda0, spec.delta);
            let stream = RngStream::for_cell(spec.seed, harness::algorithm_id(policy.kind), 0, replicate);
            let mut cfg = RunConfig::new(policy, spec.epochs, spec.batch_size, stream);
            cfg.full_batch = full_batch;
            let outcome = run(&problem, cfg)?;
            let mut stdout = std::io::stdout().lock();
            for r in &outcome.records {
                serde_json::to_writer(&mut stdout, r)?;
                writeln!(stdout)?;
            }
            eprintln!(
                "{}: {} after {} iterations, f = {}",
                outcome.run_id,
                outcome.status.label(),
                outcome.state.k,
                outcome.final_value.map_or("n/a".into(), |f| f.to_string())
            );
            Ok(!outcome.status.is_failure())
        }
        Command::Grid { config, out } => {
            let spec = load(&config, cli.seed)?;
            let problem = spec.problem.build()?;
            let dir = out_dir(&spec, out)?;
            let grid = run_sensitivity(&spec, &problem, cli.threads, Some(&dir))?;
            let failed = grid.cells.iter().filter(|c| c.diverged()).count();
            eprintln!("{} cells, {failed} failed", grid.cells.len());
            let summary = report(dir.root(), cli.format)?;
            eprintln!("wrote {} in {}", summary.files.join(", "), dir.root().display());
            Ok(true)
        }
        Command::Perf { config, out } => {
            let spec = load(&config, cli.seed)?;
            let problem = spec.problem.build()?;
            let root = out.unwrap_or_else(|| output_root().join(&spec.name));
            // compare against the manifest on disk before it is replaced
            let cached = load_grid(&root).ok().filter(|g| g.config_hash == spec.config_hash());
            let dir = out_dir(&spec, Some(root))?;
            let grid = match cached {
                Some(g) => g,
                None => run_sensitivity(&spec, &problem, cli.threads, Some(&dir))?,
            };
            let mut tuned = BTreeMap::new();
            for alg in &spec.algorithms {
                let kind = alg.kind();
                if !kind.is_adasgd() {
                    tuned.insert(kind, select_best_lambda0(&grid, kind)?);
                }
            }
            let reference = match solve_reference(&problem, default_tolerance(problem.kind()), DEFAULT_MAX_ITER) {
                Ok(r) => Some(r),
                Err(e) => {
                    eprintln!("warning: {e}; curves hold raw objective values");
                    None
                }
            };
            let perf = run_performance(&spec, &problem, &tuned, reference.as_ref(), cli.threads)?;
            dir.write_perf(&perf)?;
            let summary = report(dir.root(), cli.format)?;
            eprintln!("wrote {} in {}", summary.files.join(", "), dir.root().display());
            Ok(true)
        }
        Command::Report { dir } => {
            let summary = report(&dir, cli.format)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(true)
        }
        Command::Verify => {
            let checks = harness::verify::verify_suite(cli.seed.unwrap_or(0))?;
            for c in &checks {
                println!("{} {:<20} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
