// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! TOML run configuration.
//!
//! Each parameter pair is given either as mean and difference
//! (`t_bar`, `delta_t`) or as absolute values (`t1`, `t2`), never both.

use std::path::{Path, PathBuf};

use nessie_core::{Error as CoreError, Statistics};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cntd::Objective;
use crate::evaluate::{default_quantities, Quantity, QuantitySet};
use crate::setup::{Axis, Range, Setup};
use crate::sweep::AxisSpec;

pub const DEFAULT_SEED: u64 = 3322;
pub const POINT_RESTARTS: usize = 200;
pub const SWEEP_RESTARTS: usize = 60;
pub const DEFAULT_RECTIFICATION_BIAS: f64 = 0.6;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("`{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

impl ConfigError {
    fn invalid(key: &str, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Point,
    Sweep,
    Cntd,
    Rectmap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsName {
    Boson,
    Fermion,
}

impl From<StatisticsName> for Statistics {
    fn from(s: StatisticsName) -> Self {
        match s {
            StatisticsName::Boson => Statistics::Boson,
            StatisticsName::Fermion => Statistics::Fermion,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: Mode,
    observables: Option<Vec<Quantity>>,
    system: RawSystem,
    baths: RawBaths,
    sweep: Option<RawSweep>,
    cntd: Option<RawCntd>,
    rectmap: Option<RawRectmap>,
    #[serde(default)]
    optimizer: RawOptimizer,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    statistics: StatisticsName,
    eps_bar: Option<f64>,
    delta_eps: Option<f64>,
    eps1: Option<f64>,
    eps2: Option<f64>,
    kappa: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBaths {
    t_bar: Option<f64>,
    delta_t: Option<f64>,
    t1: Option<f64>,
    t2: Option<f64>,
    mu_bar: Option<f64>,
    delta_mu: Option<f64>,
    mu1: Option<f64>,
    mu2: Option<f64>,
    gamma_bar: Option<f64>,
    delta_gamma: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxis {
    name: Axis,
    start: f64,
    stop: f64,
    points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis1: RawAxis,
    axis2: Option<RawAxis>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCntd {
    objectives: Vec<Objective>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: f64,
    stop: f64,
    points: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRectmap {
    deps: RawRange,
    dgamma: RawRange,
    delta_t: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimizer {
    seed: Option<u64>,
    restarts: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
    #[serde(default)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub format: Format,
}

/// Fully resolved configuration, recorded verbatim in the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub setup: Setup,
    pub quantities: QuantitySet,
    pub axis1: Option<AxisSpec>,
    pub axis2: Option<AxisSpec>,
    pub objectives: Vec<Objective>,
    pub rectmap: Option<RectmapConfig>,
    pub optimizer: OptimizerConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectmapConfig {
    pub deps: Range,
    pub dgamma: Range,
    pub delta_t: f64,
}

/// Resolves a `(mean, delta)` / `(x1, x2)` pair. Keys are named for errors.
fn pair(
    section: &str,
    names: [&str; 4],
    values: [Option<f64>; 4],
    default_mean: Option<f64>,
) -> Result<(f64, f64), ConfigError> {
    let key = |i: usize| format!("{section}.{}", names[i]);
    let [mean, delta, x1, x2] = values;
    for (i, v) in values.iter().enumerate() {
        if let Some(v) = v {
            if !v.is_finite() {
                return Err(ConfigError::invalid(&key(i), "must be finite"));
            }
        }
    }
    match (x1, x2) {
        (Some(a), Some(b)) => {
            if mean.is_some() {
                return Err(ConfigError::invalid(&key(0), format!("conflicts with `{}`", key(2))));
            }
            if delta.is_some() {
                return Err(ConfigError::invalid(&key(1), format!("conflicts with `{}`", key(2))));
            }
            Ok(((a + b) / 2.0, b - a))
        }
        (Some(_), None) => Err(ConfigError::invalid(&key(3), format!("required together with `{}`", key(2)))),
        (None, Some(_)) => Err(ConfigError::invalid(&key(2), format!("required together with `{}`", key(3)))),
        (None, None) => {
            let m = mean
                .or(default_mean)
                .ok_or_else(|| ConfigError::invalid(&key(0), format!("missing (or give `{}` and `{}`)", key(2), key(3))))?;
            Ok((m, delta.unwrap_or(0.0)))
        }
    }
}

fn range(key: &str, r: &RawRange) -> Result<Range, ConfigError> {
    if !(r.start.is_finite() && r.stop.is_finite()) {
        return Err(ConfigError::invalid(key, "start and stop must be finite"));
    }
    if r.points == 0 {
        return Err(ConfigError::invalid(&format!("{key}.points"), "must be at least 1"));
    }
    Ok(Range {
        start: r.start,
        stop: r.stop,
        points: r.points,
    })
}

/// Config key responsible for a parameter-level solver error.
pub fn key_for(e: &CoreError) -> &'static str {
    match e {
        CoreError::InvalidParameter { name, .. } => match *name {
            "eps1" | "eps2" => "system.eps_bar",
            "kappa" => "system.kappa",
            "temperature" => "baths.t_bar",
            "gamma" => "baths.gamma_bar",
            "chemical_potential" => "baths.mu_bar",
            _ => "system",
        },
        CoreError::DegenerateCoupling { .. } => "system.kappa",
        CoreError::UnsupportedRegime | CoreError::MixedStatistics => "system.statistics",
        CoreError::NonPositiveBosonFrequency { .. } => "system.kappa",
        CoreError::FermionTemperatureMismatch { .. } => "baths.delta_t",
        _ => "system",
    }
}

fn check_setup(s: &Setup) -> Result<(), ConfigError> {
    let wrap = |e: CoreError| ConfigError::invalid(key_for(&e), e.to_string());
    let p = s.system_params().map_err(wrap)?;
    p.regime().map_err(wrap)?;
    let [b1, b2] = s.baths().map_err(wrap)?;
    nessie_core::OpenSystem::new(&p, &b1, &b2).map_err(wrap)?;
    Ok(())
}

pub fn parse(text: &str, mode_default_dir: &Path) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    let statistics: Statistics = raw.system.statistics.into();

    let s = &raw.system;
    let (eps_bar, delta_eps) = pair(
        "system",
        ["eps_bar", "delta_eps", "eps1", "eps2"],
        [s.eps_bar, s.delta_eps, s.eps1, s.eps2],
        Some(1.0),
    )?;
    let b = &raw.baths;
    let (t_bar, delta_t) = pair("baths", ["t_bar", "delta_t", "t1", "t2"], [b.t_bar, b.delta_t, b.t1, b.t2], None)?;
    let (mu_bar, delta_mu) = pair(
        "baths",
        ["mu_bar", "delta_mu", "mu1", "mu2"],
        [b.mu_bar, b.delta_mu, b.mu1, b.mu2],
        Some(0.0),
    )?;
    let (gamma_bar, delta_gamma) = pair(
        "baths",
        ["gamma_bar", "delta_gamma", "gamma1", "gamma2"],
        [b.gamma_bar, b.delta_gamma, b.gamma1, b.gamma2],
        None,
    )?;
    if !s.kappa.is_finite() {
        return Err(ConfigError::invalid("system.kappa", "must be finite"));
    }
    if statistics == Statistics::Boson && (mu_bar != 0.0 || delta_mu != 0.0) {
        return Err(ConfigError::invalid("baths.mu_bar", "bosonic reservoirs have zero chemical potential"));
    }
    let setup = Setup {
        statistics,
        eps_bar,
        delta_eps,
        kappa: s.kappa,
        t_bar,
        delta_t,
        mu_bar,
        delta_mu,
        gamma_bar,
        delta_gamma,
    };

    let quantities: QuantitySet = match raw.observables {
        Some(list) if list.is_empty() => return Err(ConfigError::invalid("observables", "must not be empty")),
        Some(list) => list.into_iter().collect(),
        None => default_quantities(),
    };

    let (mut axis1, mut axis2) = (None, None);
    let mut objectives = Vec::new();
    let mut rectmap = None;
    match raw.mode {
        Mode::Point | Mode::Cntd => check_setup(&setup)?,
        Mode::Sweep | Mode::Rectmap => {}
    }
    match raw.mode {
        Mode::Point => {}
        Mode::Sweep => {
            let sw = raw
                .sweep
                .as_ref()
                .ok_or_else(|| ConfigError::invalid("sweep", "section required in sweep mode"))?;
            let axis = |key: &str, a: &RawAxis| -> Result<AxisSpec, ConfigError> {
                if matches!(a.name, Axis::Mu | Axis::DeltaMu) && statistics == Statistics::Boson {
                    return Err(ConfigError::invalid(
                        &format!("{key}.name"),
                        "chemical-potential axes need fermionic reservoirs",
                    ));
                }
                let r = RawRange {
                    start: a.start,
                    stop: a.stop,
                    points: a.points,
                };
                Ok(AxisSpec {
                    axis: a.name,
                    range: range(key, &r)?,
                })
            };
            axis1 = Some(axis("sweep.axis1", &sw.axis1)?);
            axis2 = sw.axis2.as_ref().map(|a| axis("sweep.axis2", a)).transpose()?;
            if axis2.is_some_and(|a| Some(a.axis) == axis1.map(|b| b.axis)) {
                return Err(ConfigError::invalid("sweep.axis2.name", "must differ from sweep.axis1.name"));
            }
        }
        Mode::Cntd => {
            if statistics != Statistics::Boson {
                return Err(ConfigError::invalid("system.statistics", "CNTD searches run over delta_t with bosonic reservoirs"));
            }
            objectives = match &raw.cntd {
                Some(c) if c.objectives.is_empty() => {
                    return Err(ConfigError::invalid("cntd.objectives", "must not be empty"))
                }
                Some(c) => c.objectives.clone(),
                None => vec![Objective::Concurrence, Objective::I2, Objective::I3],
            };
        }
        Mode::Rectmap => {
            if statistics != Statistics::Boson {
                return Err(ConfigError::invalid("system.statistics", "rectification maps need bosonic reservoirs"));
            }
            let r = raw
                .rectmap
                .as_ref()
                .ok_or_else(|| ConfigError::invalid("rectmap", "section required in rectmap mode"))?;
            let delta_t = r.delta_t.unwrap_or(DEFAULT_RECTIFICATION_BIAS);
            if !(delta_t.is_finite() && delta_t > 0.0 && delta_t < 2.0 * t_bar) {
                return Err(ConfigError::invalid("rectmap.delta_t", "must lie in (0, 2 t_bar)"));
            }
            rectmap = Some(RectmapConfig {
                deps: range("rectmap.deps", &r.deps)?,
                dgamma: range("rectmap.dgamma", &r.dgamma)?,
                delta_t,
            });
        }
    }

    let restarts = raw.optimizer.restarts.unwrap_or(match raw.mode {
        Mode::Point => POINT_RESTARTS,
        _ => SWEEP_RESTARTS,
    });
    if restarts == 0 {
        return Err(ConfigError::invalid("optimizer.restarts", "must be at least 1"));
    }
    Ok(RunConfig {
        mode: raw.mode,
        setup,
        quantities,
        axis1,
        axis2,
        objectives,
        rectmap,
        optimizer: OptimizerConfig {
            seed: raw.optimizer.seed.unwrap_or(DEFAULT_SEED),
            restarts,
        },
        output: OutputConfig {
            directory: raw.output.directory.unwrap_or_else(|| mode_default_dir.to_path_buf()),
            format: raw.output.format,
        },
    })
}

pub fn load(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, Path::new("nessie-out"))
}
