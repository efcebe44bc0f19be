//! Runs a resolved experiment inside a sized thread pool and writes its
//! tables plus a JSON manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ParamValue, ResolvedConfig};
use crate::error::RunError;
use crate::table::Table;

/// Manifest file name inside the output directory.
pub const MANIFEST_FILE: &str = "manifest.json";

/// Named pass/fail record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// What was checked.
    pub name: String,
    /// Outcome.
    pub pass: bool,
    /// Measured values.
    pub detail: String,
}

/// Random stream used by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamRecord {
    /// What the stream drives.
    pub purpose: String,
    /// Stream index under the master seed.
    pub stream: u64,
}

/// Collects everything an experiment produces.
///
/// Invariants are conservation or consistency checks; a failing invariant
/// turns the run into a runtime failure. Expectations compare against the
/// qualitative behavior the experiment is meant to show and are only reported.
#[derive(Debug, Default)]
pub struct Recorder {
    tables: Vec<Table>,
    invariants: Vec<Check>,
    expectations: Vec<Check>,
    streams: Vec<StreamRecord>,
    notes: Vec<String>,
}

impl Recorder {
    /// Empty recorder.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an output table.
    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    /// Records an invariant check.
    pub fn invariant(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.invariants.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records an expectation check.
    pub fn expect(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.expectations.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    /// Records a random stream.
    pub fn stream(&mut self, purpose: impl Into<String>, stream: u64) {
        self.streams.push(StreamRecord {
            purpose: purpose.into(),
            stream,
        });
    }

    /// Free-form note for the manifest.
    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Tables so far.
    pub fn tables(&self) -> &[Table] {
        &self.tables
    }

    /// Table by name.
    pub fn find_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Invariant checks so far.
    pub fn invariants(&self) -> &[Check] {
        &self.invariants
    }

    /// Expectation checks so far.
    pub fn expectations(&self) -> &[Check] {
        &self.expectations
    }

    /// Expectation by name.
    pub fn find_expectation(&self, name: &str) -> Option<&Check> {
        self.expectations.iter().find(|c| c.name == name)
    }
}

/// Final state of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// Completed with every invariant satisfied.
    Ok,
    /// Completed, but at least one invariant failed.
    InvariantViolation,
    /// Stopped early on a kernel error.
    Failed,
}

/// Written output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// File name relative to the output directory.
    pub file: String,
    /// Data rows.
    pub rows: usize,
    /// Hex SHA-256 of the file bytes.
    pub sha256: String,
}

/// Library identification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LibraryInfo {
    /// Crate name.
    pub name: String,
    /// Crate version.
    pub version: String,
}

/// Resolved config as echoed in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    /// Experiment name.
    pub experiment: String,
    /// Every parameter, defaults included.
    pub parameters: BTreeMap<String, ParamValue>,
    /// Master seed.
    pub seed: u64,
    /// Worker threads.
    pub threads: usize,
    /// Output directory.
    pub output_dir: PathBuf,
}

/// Run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Library that produced the outputs.
    pub library: LibraryInfo,
    /// Resolved config.
    pub config: ConfigEcho,
    /// Master seed and the streams drawn from it.
    pub seeds: SeedInfo,
    /// Wall-clock seconds spent in the experiment.
    pub wall_time_seconds: f64,
    /// Final state.
    pub status: RunStatus,
    /// `true` when the outputs stop short of the configured run.
    pub partial: bool,
    /// Kernel error that stopped the run.
    pub error: Option<String>,
    /// Validation warnings.
    pub warnings: Vec<String>,
    /// Conservation and consistency checks.
    pub invariants: Vec<Check>,
    /// Qualitative expectations.
    pub expectations: Vec<Check>,
    /// Free-form notes.
    pub notes: Vec<String>,
    /// Written tables.
    pub outputs: Vec<OutputRecord>,
}

/// Seeding record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedInfo {
    /// Master seed.
    pub master: u64,
    /// Streams under the master seed.
    pub streams: Vec<StreamRecord>,
}

impl Manifest {
    /// Reads a manifest file.
    pub fn read(path: &Path) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(std::io::Error::other)
    }
}

/// Outcome of [`execute`].
#[derive(Debug, Clone)]
pub struct RunReport {
    /// The manifest as written.
    pub manifest: Manifest,
    /// Manifest path.
    pub manifest_path: PathBuf,
}

impl RunReport {
    /// `Err` unless the run completed with every invariant satisfied.
    pub fn into_result(self) -> Result<Self, RunError> {
        match self.manifest.status {
            RunStatus::Ok => Ok(self),
            RunStatus::Failed => Err(RunError::Runtime(
                self.manifest.error.clone().unwrap_or_default(),
            )),
            RunStatus::InvariantViolation => {
                let failed: Vec<&str> = self
                    .manifest
                    .invariants
                    .iter()
                    .filter(|c| !c.pass)
                    .map(|c| c.name.as_str())
                    .collect();
                Err(RunError::Runtime(format!(
                    "invariant violated: {}",
                    failed.join(", ")
                )))
            }
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Runs the experiment without touching the file system.
pub fn simulate(
    cfg: &ResolvedConfig,
) -> Result<(Recorder, Result<(), kickosc_core::Error>, f64), RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| RunError::Runtime(format!("thread pool: {e}")))?;
    let mut rec = Recorder::new();
    let start = Instant::now();
    let outcome = pool.install(|| cfg.experiment.run(&cfg.params, cfg.seed, &mut rec));
    Ok((rec, outcome, start.elapsed().as_secs_f64()))
}

/// Runs the experiment, writes every table it produced (also after a failure)
/// and the manifest. Returns `Err` only when nothing could be written.
pub fn execute(cfg: &ResolvedConfig) -> Result<RunReport, RunError> {
    let (rec, outcome, wall) = simulate(cfg)?;
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|source| RunError::Output {
        path: dir.clone(),
        source,
    })?;
    let mut outputs = Vec::new();
    for t in &rec.tables {
        let bytes = t.to_csv_bytes();
        let file = format!("{}.csv", t.name);
        let path = dir.join(&file);
        std::fs::write(&path, &bytes).map_err(|source| RunError::Output { path, source })?;
        outputs.push(OutputRecord {
            file,
            rows: t.rows(),
            sha256: sha256_hex(&bytes),
        });
    }
    let status = match &outcome {
        Err(_) => RunStatus::Failed,
        Ok(()) if rec.invariants.iter().any(|c| !c.pass) => RunStatus::InvariantViolation,
        Ok(()) => RunStatus::Ok,
    };
    let manifest = Manifest {
        library: LibraryInfo {
            name: "kickosc".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        config: ConfigEcho {
            experiment: cfg.experiment.name().to_string(),
            parameters: cfg.params.as_map().clone(),
            seed: cfg.seed,
            threads: cfg.threads,
            output_dir: cfg.output_dir.clone(),
        },
        seeds: SeedInfo {
            master: cfg.seed,
            streams: rec.streams,
        },
        wall_time_seconds: wall,
        status,
        partial: outcome.is_err(),
        error: outcome.err().map(|e| e.to_string()),
        warnings: cfg.warnings.clone(),
        invariants: rec.invariants,
        expectations: rec.expectations,
        notes: rec.notes,
        outputs,
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&manifest_path, text + "\n").map_err(|source| RunError::Output {
        path: manifest_path.clone(),
        source,
    })?;
    Ok(RunReport {
        manifest,
        manifest_path,
    })
}
