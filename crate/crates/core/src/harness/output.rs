use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::grid::{cell_id, CellResult, GridResult, PerfResult};
use crate::harness::ExperimentSpec;
use crate::optimizer::RunRecord;

/// Environment variable naming the directory experiments write under.
pub const OUTPUT_ROOT_ENV: &str = "ADASGD_OUTPUT_ROOT";

pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("outputs"))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            _ => Err(Error::Config(format!("unknown format '{s}' (expected csv or jsonl)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
    pub n_cells: usize,
    pub spec: ExperimentSpec,
}

impl Manifest {
    pub fn for_spec(spec: &ExperimentSpec) -> Self {
        Self {
            name: spec.name.clone(),
            config_hash: spec.config_hash(),
            seed: spec.seed,
            n_cells: spec.n_cells(),
            spec: spec.clone(),
        }
    }
}

/// Writes `bytes` to `path` through a temporary file and a rename, so a
/// reader never sees a half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Layout of one experiment directory:
///
/// ```text
/// manifest.json
/// cells/<cell>.json      terminal summary per grid cell
/// records/<cell>.jsonl   one RunRecord per line
/// perf/result.json       tuned comparison
/// ```
#[derive(Clone, Debug)]
pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        for sub in ["cells", "records", "perf"] {
            fs::create_dir_all(root.join(sub))?;
        }
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_manifest(&self, manifest: &Manifest) -> Result<()> {
        write_atomic(&self.root.join("manifest.json"), &serde_json::to_vec_pretty(manifest)?)
    }

    pub fn write_cell(&self, cell: &CellResult) -> Result<()> {
        let path = self.root.join("cells").join(format!("{}.json", cell.id()));
        write_atomic(&path, &serde_json::to_vec(cell)?)
    }

    pub fn write_records(&self, id: &str, records: &[RunRecord]) -> Result<()> {
        let mut buf = Vec::new();
        for r in records {
            serde_json::to_writer(&mut buf, r)?;
            buf.push(b'\n');
        }
        write_atomic(&self.root.join("records").join(format!("{id}.jsonl")), &buf)
    }

    pub fn write_perf(&self, perf: &PerfResult) -> Result<()> {
        write_atomic(&self.root.join("perf").join("result.json"), &serde_json::to_vec(perf)?)
    }
}

/// Machine-readable summary written next to the tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub name: String,
    pub config_hash: String,
    pub seed: u64,
    pub cells: usize,
    pub failed_cells: usize,
    pub perf_runs: usize,
    pub files: Vec<String>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> std::result::Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_cells(dir: &Path) -> Result<(Manifest, Vec<CellResult>, Vec<String>)> {
    let manifest: Manifest = read_json(&dir.join("manifest.json")).map_err(Error::Report)?;
    let any_cells = fs::read_dir(dir.join("cells"))
        .map(|mut d| d.any(|e| e.is_ok_and(|e| e.path().extension().is_some_and(|x| x == "json"))))
        .unwrap_or(false);
    let mut offenders = Vec::new();
    let mut cells = Vec::new();
    if !any_cells {
        // a comparison-only experiment
        return Ok((manifest, cells, offenders));
    }
    let spec = &manifest.spec;
    for alg in &spec.algorithms {
        for gi in 0..spec.lambda0_grid.len() {
            for rep in 0..spec.replicates {
                let id = cell_id(alg.kind(), gi, rep);
                let path = dir.join("cells").join(format!("{id}.json"));
                if !path.exists() {
                    offenders.push(format!("missing cell {id}"));
                    continue;
                }
                match read_json::<CellResult>(&path) {
                    Ok(c) => cells.push(c),
                    Err(e) => offenders.push(format!("corrupt cell {e}")),
                }
            }
        }
    }
    Ok((manifest, cells, offenders))
}

/// Reads a completed sensitivity grid back from disk.
pub fn load_grid(dir: &Path) -> Result<GridResult> {
    if !dir.join("manifest.json").exists() {
        return Err(Error::Report(format!("no experiment outputs in {}", dir.display())));
    }
    let (manifest, cells, offenders) = read_cells(dir)?;
    if !offenders.is_empty() {
        return Err(Error::Report(offenders.join("; ")));
    }
    if cells.is_empty() {
        return Err(Error::Report(format!("no grid cells in {}", dir.display())));
    }
    Ok(GridResult {
        name: manifest.name,
        config_hash: manifest.config_hash,
        cells,
    })
}

/// Compacts an experiment directory into plot-ready tables:
/// `sensitivity.{csv,jsonl}`, `curves.{csv,jsonl}` when a tuned comparison
/// for the same configuration exists, and `summary.json`. Output is a pure
/// function of the inputs.
pub fn report(dir: &Path, format: Format) -> Result<ReportSummary> {
    let manifest_path = dir.join("manifest.json");
    if !manifest_path.exists() {
        return Err(Error::Report(format!("no experiment outputs in {}", dir.display())));
    }
    let (manifest, cells, mut offenders) = read_cells(dir)?;
    let perf_path = dir.join("perf").join("result.json");
    let perf: Option<PerfResult> = if perf_path.exists() {
        match read_json::<PerfResult>(&perf_path) {
            // left over from another configuration
            Ok(p) if p.config_hash != manifest.config_hash => None,
            Ok(p) => Some(p),
            Err(e) => {
                offenders.push(format!("corrupt perf result {e}"));
                None
            }
        }
    } else {
        None
    };
    if cells.is_empty() && perf.is_none() && offenders.is_empty() {
        return Err(Error::Report(format!("no results in {}", dir.display())));
    }
    if !offenders.is_empty() {
        return Err(Error::Report(offenders.join("; ")));
    }

    let mut files = Vec::new();
    if !cells.is_empty() {
        let name = match format {
            Format::Csv => "sensitivity.csv",
            Format::Jsonl => "sensitivity.jsonl",
        };
        let bytes = match format {
            Format::Csv => {
                let mut w = ::csv::Writer::from_writer(Vec::new());
                w.write_record(["algorithm", "lambda0", "replicate", "final_f", "status"])
                    .map_err(|e| Error::Report(e.to_string()))?;
                for c in &cells {
                    w.write_record([
                        c.algorithm.name().to_string(),
                        format!("{}", c.lambda0),
                        c.replicate.to_string(),
                        fmt_opt(c.final_f),
                        c.status.label().to_string(),
                    ])
                    .map_err(|e| Error::Report(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Error::Report(e.to_string()))?
            }
            Format::Jsonl => {
                let mut buf = Vec::new();
                for c in &cells {
                    serde_json::to_writer(
                        &mut buf,
                        &serde_json::json!({
                            "algorithm": c.algorithm,
                            "lambda0": c.lambda0,
                            "replicate": c.replicate,
                            "final_f": c.final_f,
                            "status": c.status.label(),
                        }),
                    )?;
                    buf.push(b'\n');
                }
                buf
            }
        };
        write_atomic(&dir.join(name), &bytes)?;
        files.push(name.to_string());
    }
    if let Some(perf) = &perf {
        let name = match format {
            Format::Csv => "curves.csv",
            Format::Jsonl => "curves.jsonl",
        };
        let points = perf.curves();
        let bytes = match format {
            Format::Csv => {
                let mut w = ::csv::Writer::from_writer(Vec::new());
                w.write_record(["algorithm", "epoch", "suboptimality"])
                    .map_err(|e| Error::Report(e.to_string()))?;
                for p in &points {
                    w.write_record([
                        p.algorithm.name().to_string(),
                        format!("{}", p.epoch),
                        format!("{}", p.suboptimality),
                    ])
                    .map_err(|e| Error::Report(e.to_string()))?;
                }
                w.into_inner().map_err(|e| Error::Report(e.to_string()))?
            }
            Format::Jsonl => {
                let mut buf = Vec::new();
                for p in &points {
                    serde_json::to_writer(&mut buf, p)?;
                    buf.push(b'\n');
                }
                buf
            }
        };
        write_atomic(&dir.join(name), &bytes)?;
        files.push(name.to_string());
    }
    files.push("summary.json".to_string());
    let summary = ReportSummary {
        name: manifest.name,
        config_hash: manifest.config_hash,
        seed: manifest.seed,
        cells: cells.len(),
        failed_cells: cells.iter().filter(|c| c.diverged()).count(),
        perf_runs: perf.as_ref().map_or(0, |p| p.runs.len()),
        files,
    };
    write_atomic(&dir.join("summary.json"), &serde_json::to_vec_pretty(&summary)?)?;
    Ok(summary)
}
