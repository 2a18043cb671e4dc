// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Atomic file output and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{Mode, RunConfig};
use crate::table::Table;

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn csv_bytes(table: &Table) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    table.write_csv(&mut buf).map_err(std::io::Error::other)?;
    Ok(buf)
}

pub fn json_bytes<T: Serialize>(value: &T) -> std::io::Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(std::io::Error::other)?;
    buf.push(b'\n');
    Ok(buf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSource {
    Config,
    Env,
    Default,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rows: usize,
    pub failed_rows: usize,
    /// Largest `||L rho||` over evaluated points.
    pub worst_residual: Option<f64>,
    /// Most negative steady-state eigenvalue kept after clipping.
    pub worst_min_eig: Option<f64>,
}

impl Diagnostics {
    pub fn record(&mut self, residual: Option<f64>, min_eig: Option<f64>) {
        if let Some(r) = residual {
            self.worst_residual = Some(self.worst_residual.map_or(r, |w| w.max(r)));
        }
        if let Some(m) = min_eig {
            self.worst_min_eig = Some(self.worst_min_eig.map_or(m, |w| w.min(m)));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub mode: Mode,
    pub config_path: PathBuf,
    pub config: RunConfig,
    pub seed: u64,
    pub seed_source: SeedSource,
    pub threads: usize,
    /// Seconds since the Unix epoch at start.
    pub started_at: u64,
    pub wall_seconds: f64,
    pub diagnostics: Diagnostics,
    pub outputs: Vec<String>,
    pub error: Option<String>,
}

pub const MANIFEST_FILE: &str = "manifest.json";
