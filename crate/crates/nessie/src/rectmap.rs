// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! CNTDs and rectification over a detuning grid, and the line in the
//! `(deps, dgamma)` plane on which the concurrence CNTD vanishes.

use nessie_core::I3322Config;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cntd::{find_cntd, Objective};
use crate::evaluate::rectification;
use crate::setup::{Range, Setup};
use crate::table::{Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectmapSpec {
    pub base: Setup,
    pub deps: Range,
    pub dgamma: Range,
    /// Bias at which the rectification ratio is evaluated.
    pub delta_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub deps: f64,
    pub dgamma: f64,
    pub dt0_c: Result<f64, String>,
    pub dt0_i2: Result<f64, String>,
    pub r: Result<f64, String>,
}

impl MapPoint {
    pub fn errors(&self) -> String {
        let mut e = Vec::new();
        for (name, v) in [("dT0_C", &self.dt0_c), ("dT0_I2", &self.dt0_i2), ("R", &self.r)] {
            if let Err(m) = v {
                e.push(format!("{name}: {m}"));
            }
        }
        e.join("; ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlongLine {
    pub deps: f64,
    pub dgamma: f64,
    pub r: Option<f64>,
}

/// `dgamma = intercept + slope * deps` fitted to the zero crossings of the
/// concurrence CNTD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub crossings: Vec<[f64; 2]>,
    /// Rectification ratio re-evaluated on the fitted line.
    pub along_line: Vec<AlongLine>,
    pub max_abs_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectMap {
    pub points: Vec<MapPoint>,
    pub fit: Result<LineFit, String>,
}

fn setup_at(spec: &RectmapSpec, deps: f64, dgamma: f64) -> Setup {
    Setup {
        delta_eps: deps,
        delta_gamma: dgamma,
        ..spec.base
    }
}

fn r_at(spec: &RectmapSpec, deps: f64, dgamma: f64) -> Result<f64, String> {
    let s = Setup {
        delta_t: spec.delta_t,
        ..setup_at(spec, deps, dgamma)
    };
    rectification(&s).map_err(|e| e.to_string())
}

/// Ordinary least squares `y = a + b x` with its coefficient of determination.
pub fn fit_line(points: &[[f64; 2]]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p[0] - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum();
    let syy: f64 = points.iter().map(|p| (p[1] - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p[1] - intercept - slope * p[0]).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some((intercept, slope, r2))
}

/// Linear interpolation of sign changes of `dt0_c` along `dgamma` at each `deps`.
fn zero_crossings(points: &[MapPoint], n_gamma: usize) -> Vec<[f64; 2]> {
    let mut out = Vec::new();
    for column in points.chunks(n_gamma) {
        for w in column.windows(2) {
            let (Ok(a), Ok(b)) = (&w[0].dt0_c, &w[1].dt0_c) else {
                continue;
            };
            if *a == 0.0 {
                out.push([w[0].deps, w[0].dgamma]);
            } else if a.signum() != b.signum() && *b != 0.0 {
                let t = a / (a - b);
                out.push([w[0].deps, w[0].dgamma + t * (w[1].dgamma - w[0].dgamma)]);
            }
        }
        if let Some(Ok(last)) = column.last().map(|p| &p.dt0_c) {
            if *last == 0.0 {
                let p = column.last().expect("non-empty");
                out.push([p.deps, p.dgamma]);
            }
        }
    }
    out
}

pub fn cancellation_map(spec: &RectmapSpec, i3: &I3322Config) -> RectMap {
    let eps = spec.deps.values();
    let gam = spec.dgamma.values();
    let grid: Vec<(f64, f64)> = eps
        .iter()
        .flat_map(|&e| gam.iter().map(move |&g| (e, g)))
        .collect();
    let points: Vec<MapPoint> = grid
        .into_par_iter()
        .map(|(deps, dgamma)| {
            let s = setup_at(spec, deps, dgamma);
            let cntd = |o| find_cntd(&s, o, i3).map(|e| e.delta_t0).map_err(|e| e.to_string());
            MapPoint {
                deps,
                dgamma,
                dt0_c: cntd(Objective::Concurrence),
                dt0_i2: cntd(Objective::I2),
                r: r_at(spec, deps, dgamma),
            }
        })
        .collect();

    let crossings = zero_crossings(&points, gam.len().max(1));
    let fit = match fit_line(&crossings) {
        None => Err(format!(
            "{} zero crossings of dT0_C; a line needs at least two distinct deps",
            crossings.len()
        )),
        Some((intercept, slope, r_squared)) => {
            let along_line: Vec<AlongLine> = crossings
                .par_iter()
                .map(|c| {
                    let dgamma = intercept + slope * c[0];
                    AlongLine {
                        deps: c[0],
                        dgamma,
                        r: r_at(spec, c[0], dgamma).ok(),
                    }
                })
                .collect();
            let max_abs_r = along_line
                .iter()
                .filter_map(|p| p.r.map(f64::abs))
                .reduce(f64::max);
            Ok(LineFit {
                intercept,
                slope,
                r_squared,
                crossings,
                along_line,
                max_abs_r,
            })
        }
    };
    RectMap { points, fit }
}

pub fn rectmap_table(map: &RectMap) -> Table {
    let mut t = Table::new(
        ["deps", "dgamma", "R", "dT0_C", "dT0_I2", "err"]
            .map(String::from)
            .to_vec(),
    );
    let cell = |v: &Result<f64, String>| v.as_ref().map_or(Cell::Empty, |x| Cell::Num(*x));
    for p in &map.points {
        t.push(vec![
            Cell::Num(p.deps),
            Cell::Num(p.dgamma),
            cell(&p.r),
            cell(&p.dt0_c),
            cell(&p.dt0_i2),
            Cell::Text(p.errors()),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_exact_line() {
        let pts: Vec<[f64; 2]> = (0..5).map(|k| [k as f64, 0.5 - 2.0 * k as f64]).collect();
        let (a, b, r2) = fit_line(&pts).unwrap();
        assert!((a - 0.5).abs() < 1e-12 && (b + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert!(fit_line(&pts[..1]).is_none());
    }

    #[test]
    fn crossings_are_interpolated_per_column() {
        let mk = |deps, dgamma, v: f64| MapPoint {
            deps,
            dgamma,
            dt0_c: Ok(v),
            dt0_i2: Ok(0.0),
            r: Ok(0.0),
        };
        let pts = vec![
            mk(0.0, -1.0, 1.0),
            mk(0.0, 0.0, 0.5),
            mk(0.0, 1.0, -0.5),
            mk(1.0, -1.0, 1.0),
            mk(1.0, 0.0, 3.0),
            mk(1.0, 1.0, 1.0),
        ];
        assert_eq!(zero_crossings(&pts, 3), vec![[0.0, 0.5]]);
    }
}
