// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dispatch of a configured run and the exit-status contract.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use nessie_core::{Error as CoreError, I3322Config};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cntd::{find_cntd, CntdEntry, CntdError, Objective};
use crate::config::{self, ConfigError, Format, Mode, RunConfig};
use crate::evaluate::evaluate;
use crate::output::{self, Diagnostics, Manifest, SeedSource, MANIFEST_FILE};
use crate::rectmap::{cancellation_map, rectmap_table, LineFit, RectmapSpec};
use crate::sweep::{run_sweep, Row, SweepSpec};
use crate::table::{observable_table, Table};

pub const SEED_ENV: &str = "NESSIE_SEED";

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("point evaluation failed: {0}")]
    Solver(CoreError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Solver(_) => 2,
            RunError::Io(_) | RunError::Pool(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub output_dir: Option<PathBuf>,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
    /// Raw value of `NESSIE_SEED`, if set.
    pub seed_env: Option<String>,
}

impl RunOptions {
    pub fn from_env(output_dir: Option<PathBuf>, threads: Option<usize>) -> Self {
        Self {
            output_dir,
            threads,
            seed_env: std::env::var(SEED_ENV).ok(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub manifest: Manifest,
    pub directory: PathBuf,
}

/// Applies `NESSIE_SEED` and `--output-dir` on top of the parsed file.
pub fn resolve(text: &str, opts: &RunOptions) -> Result<(RunConfig, SeedSource), ConfigError> {
    let mut cfg = config::parse(text, Path::new("nessie-out"))?;
    let from_file = toml::from_str::<toml::Table>(text)
        .ok()
        .and_then(|t| t.get("optimizer")?.get("seed").cloned())
        .is_some();
    let mut source = if from_file { SeedSource::Config } else { SeedSource::Default };
    if let Some(raw) = &opts.seed_env {
        cfg.optimizer.seed = raw.trim().parse().map_err(|_| ConfigError::Invalid {
            key: SEED_ENV.to_string(),
            reason: format!("expected an unsigned integer, got {raw:?}"),
        })?;
        source = SeedSource::Env;
    }
    if let Some(dir) = &opts.output_dir {
        cfg.output.directory = dir.clone();
    }
    Ok((cfg, source))
}

fn i3_config(cfg: &RunConfig) -> I3322Config {
    I3322Config {
        seed: cfg.optimizer.seed,
        restarts: cfg.optimizer.restarts,
        ..I3322Config::default()
    }
}

struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
    diagnostics: Diagnostics,
    error: Option<RunError>,
}

fn table_file(name: &str, table: &Table, format: Format) -> std::io::Result<(String, Vec<u8>)> {
    Ok(match format {
        Format::Csv => (format!("{name}.csv"), output::csv_bytes(table)?),
        Format::Json => (format!("{name}.json"), output::json_bytes(&table.to_json())?),
    })
}

fn row_diagnostics(rows: &[Row]) -> Diagnostics {
    let mut d = Diagnostics {
        rows: rows.len(),
        ..Diagnostics::default()
    };
    for r in rows {
        match &r.outcome {
            Ok(v) => {
                d.record(v.residual, v.min_eig);
                if !v.errors.is_empty() {
                    d.failed_rows += 1;
                }
            }
            Err(_) => d.failed_rows += 1,
        }
    }
    d
}

fn run_point(cfg: &RunConfig) -> std::io::Result<Artifacts> {
    let stats = cfg.setup.statistics;
    let outcome = evaluate(&cfg.setup, &cfg.quantities, &i3_config(cfg));
    let (rows, error) = match outcome {
        Ok(v) => (
            vec![Row {
                coords: vec![],
                outcome: Ok(v),
            }],
            None,
        ),
        Err(f) => (
            vec![Row {
                coords: vec![],
                outcome: Err(f.to_string()),
            }],
            Some(RunError::Solver(f.error)),
        ),
    };
    let table = observable_table(&[], &cfg.quantities, stats, &rows);
    Ok(Artifacts {
        files: vec![table_file("point", &table, cfg.output.format)?],
        diagnostics: row_diagnostics(&rows),
        error,
    })
}

fn run_sweep_mode(cfg: &RunConfig) -> std::io::Result<Artifacts> {
    let axis1 = cfg.axis1.expect("validated: sweep mode has axis1");
    let spec = SweepSpec {
        axis1,
        axis2: cfg.axis2,
        base: cfg.setup,
        quantities: cfg.quantities.clone(),
        i3: i3_config(cfg),
    };
    let rows = run_sweep(&spec);
    let table = observable_table(&spec.axes(), &cfg.quantities, cfg.setup.statistics, &rows);
    Ok(Artifacts {
        files: vec![table_file("sweep", &table, cfg.output.format)?],
        diagnostics: row_diagnostics(&rows),
        error: None,
    })
}

#[derive(Serialize)]
struct CntdRecord {
    objective: Objective,
    result: Option<CntdEntry>,
    error: Option<CntdError>,
}

fn run_cntd(cfg: &RunConfig) -> std::io::Result<Artifacts> {
    let i3 = i3_config(cfg);
    let records: Vec<CntdRecord> = cfg
        .objectives
        .par_iter()
        .map(|&objective| {
            let (result, error) = match find_cntd(&cfg.setup, objective, &i3) {
                Ok(e) => (Some(e), None),
                Err(e) => (None, Some(e)),
            };
            CntdRecord {
                objective,
                result,
                error,
            }
        })
        .collect();
    let diagnostics = Diagnostics {
        rows: records.len(),
        failed_rows: records.iter().filter(|r| r.error.is_some()).count(),
        ..Diagnostics::default()
    };
    let body = serde_json::json!({ "setup": cfg.setup, "cntd": records });
    Ok(Artifacts {
        files: vec![("cntd.json".to_string(), output::json_bytes(&body)?)],
        diagnostics,
        error: None,
    })
}

#[derive(Serialize)]
struct RectmapSummary<'a> {
    spec: &'a RectmapSpec,
    fit: Option<&'a LineFit>,
    fit_error: Option<&'a str>,
}

fn run_rectmap(cfg: &RunConfig) -> std::io::Result<Artifacts> {
    let r = cfg.rectmap.expect("validated: rectmap mode has its section");
    let spec = RectmapSpec {
        base: cfg.setup,
        deps: r.deps,
        dgamma: r.dgamma,
        delta_t: r.delta_t,
    };
    let map = cancellation_map(&spec, &i3_config(cfg));
    let table = rectmap_table(&map);
    let summary = RectmapSummary {
        spec: &spec,
        fit: map.fit.as_ref().ok(),
        fit_error: map.fit.as_ref().err().map(String::as_str),
    };
    let diagnostics = Diagnostics {
        rows: map.points.len(),
        failed_rows: map.points.iter().filter(|p| !p.errors().is_empty()).count(),
        ..Diagnostics::default()
    };
    Ok(Artifacts {
        files: vec![
            table_file("rectmap", &table, cfg.output.format)?,
            ("rectmap_fit.json".to_string(), output::json_bytes(&summary)?),
        ],
        diagnostics,
        error: None,
    })
}

/// Runs the configuration at `path`. On a point-mode solver failure the
/// outputs and manifest are still written before the error is returned.
pub fn run(path: &Path, opts: &RunOptions) -> Result<RunSummary, RunError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let (cfg, seed_source) = resolve(&text, opts)?;

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;

    let started_at = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let artifacts = pool.install(|| match cfg.mode {
        Mode::Point => run_point(&cfg),
        Mode::Sweep => run_sweep_mode(&cfg),
        Mode::Cntd => run_cntd(&cfg),
        Mode::Rectmap => run_rectmap(&cfg),
    })?;
    let wall_seconds = clock.elapsed().as_secs_f64();

    let dir = cfg.output.directory.clone();
    std::fs::create_dir_all(&dir)?;
    let mut outputs = Vec::new();
    for (name, bytes) in &artifacts.files {
        output::write_atomic(&dir.join(name), bytes)?;
        log::info!("wrote {}", dir.join(name).display());
        outputs.push(name.clone());
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        mode: cfg.mode,
        config_path: path.to_path_buf(),
        seed: cfg.optimizer.seed,
        seed_source,
        threads: pool.current_num_threads(),
        started_at,
        wall_seconds,
        diagnostics: artifacts.diagnostics,
        outputs,
        error: artifacts.error.as_ref().map(ToString::to_string),
        config: cfg,
    };
    output::write_atomic(&dir.join(MANIFEST_FILE), &output::json_bytes(&manifest)?)?;
    match artifacts.error {
        Some(e) => Err(e),
        None => Ok(RunSummary { manifest, directory: dir }),
    }
}
