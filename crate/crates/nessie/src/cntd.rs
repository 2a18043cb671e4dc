// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Critical nonequilibrium temperature difference: the `delta_t` that
//! maximizes an observable at fixed mean temperature.

use argmin::core::{CostFunction, Executor};
use argmin::solver::brent::BrentOpt;
use nessie_core::correlations::{chsh_violation, concurrence, horodecki_m, i3322_max, XState};
use nessie_core::{solve_steady_state, I3322Config, OpenSystem};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::setup::Setup;

/// Coarse grid size over the open bracket `(-2 t_bar, 2 t_bar)`.
pub const COARSE_POINTS: usize = 41;
/// Two coarse maxima count as separate modes when the objective dips by more
/// than this between them.
pub const MODE_SEPARATION: f64 = 1e-4;
/// Refinement target relative to `t_bar`.
pub const LOCATION_TOLERANCE: f64 = 1e-6;
/// Stationarity threshold for the centered-difference derivative.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "C")]
    Concurrence,
    #[serde(rename = "I2")]
    I2,
    #[serde(rename = "I3")]
    I3,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Concurrence => "C",
            Objective::I2 => "I2",
            Objective::I3 => "I3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Edge {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CntdError {
    #[error("maximum at the {edge:?} edge of the bracket (delta_t = {delta_t})")]
    BoundaryMaximum { edge: Edge, delta_t: f64, value: f64 },
    #[error("coarse scan has separate maxima at delta_t = {first} and {second}")]
    MultiModal { first: f64, second: f64 },
    #[error("objective vanishes on the whole bracket")]
    Vanishing,
    #[error("solver failed at delta_t = {delta_t}: {message}")]
    Solver { delta_t: f64, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CntdEntry {
    pub objective: Objective,
    pub delta_t0: f64,
    pub value: f64,
    /// Centered-difference derivative at `delta_t0`.
    pub derivative: f64,
    pub stationary: bool,
    pub bracket: [f64; 2],
    pub evaluations: usize,
}

/// Objective as a function of `delta_t` with everything else fixed.
pub fn objective_at(base: &Setup, objective: Objective, delta_t: f64, i3: &I3322Config) -> Result<f64, String> {
    let s = Setup { delta_t, ..*base };
    let run = || -> nessie_core::Result<f64> {
        let p = s.system_params()?;
        let [b1, b2] = s.baths()?;
        let sys = OpenSystem::new(&p, &b1, &b2)?;
        let ss = solve_steady_state(&sys.liouvillian, &sys.eigensystem)?;
        Ok(match objective {
            Objective::Concurrence => concurrence(&XState::from_density(&ss.rho_local)?),
            Objective::I2 => {
                let (m, _) = horodecki_m(&XState::from_density(&ss.rho_local)?);
                chsh_violation(2.0 * m.sqrt())
            }
            Objective::I3 => i3322_max(&ss.rho_local, i3)?.value,
        })
    };
    run().map_err(|e| e.to_string())
}

/// `COARSE_POINTS` interior points of `(-2 t_bar, 2 t_bar)`.
pub fn coarse_grid(t_bar: f64) -> Vec<f64> {
    let n = COARSE_POINTS + 1;
    (1..n)
        .map(|k| -2.0 * t_bar + 4.0 * t_bar * k as f64 / n as f64)
        .collect()
}

/// Strict local maxima of a sampled curve; plateaus count once, at their
/// first sample.
fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// First pair of maxima separated by a dip deeper than `MODE_SEPARATION`.
fn separate_modes(values: &[f64], maxima: &[usize]) -> Option<(usize, usize)> {
    for (a, &i) in maxima.iter().enumerate() {
        for &j in &maxima[a + 1..] {
            let dip = values[i..=j].iter().copied().fold(f64::INFINITY, f64::min);
            if values[i].min(values[j]) - dip > MODE_SEPARATION {
                return Some((i, j));
            }
        }
    }
    None
}

struct Negated<F: Fn(f64) -> f64> {
    f: F,
}

impl<F: Fn(f64) -> f64> CostFunction for Negated<F> {
    type Param = f64;
    type Output = f64;

    fn cost(&self, x: &f64) -> Result<f64, argmin::core::Error> {
        Ok(-(self.f)(*x))
    }
}

/// Coarse scan, then Brent refinement between the neighbors of the best sample.
pub fn find_cntd(base: &Setup, objective: Objective, i3: &I3322Config) -> Result<CntdEntry, CntdError> {
    let t_bar = base.t_bar;
    let grid = coarse_grid(t_bar);
    let mut values = Vec::with_capacity(grid.len());
    for &d in &grid {
        let v = objective_at(base, objective, d, i3).map_err(|message| CntdError::Solver { delta_t: d, message })?;
        values.push(v);
    }
    let mut evaluations = grid.len();

    let best = (0..values.len())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)))
        .unwrap_or(0);
    if values[best] <= 0.0 {
        return Err(CntdError::Vanishing);
    }
    if best == 0 || best + 1 == values.len() {
        return Err(CntdError::BoundaryMaximum {
            edge: if best == 0 { Edge::Lower } else { Edge::Upper },
            delta_t: grid[best],
            value: values[best],
        });
    }
    if let Some((i, j)) = separate_modes(&values, &local_maxima(&values)) {
        return Err(CntdError::MultiModal {
            first: grid[i],
            second: grid[j],
        });
    }

    let bracket = [grid[best - 1], grid[best + 1]];
    let failure = std::cell::RefCell::new(None);
    let f = |d: f64| match objective_at(base, objective, d, i3) {
        Ok(v) => v,
        Err(message) => {
            failure.borrow_mut().get_or_insert(CntdError::Solver { delta_t: d, message });
            f64::NEG_INFINITY
        }
    };
    let solver = BrentOpt::new(bracket[0], bracket[1]).set_tolerance(1.5e-8, 1e-2 * LOCATION_TOLERANCE * t_bar);
    let result = Executor::new(Negated { f: &f }, solver)
        .configure(|state| state.max_iters(200))
        .run()
        .map_err(|e| CntdError::Solver {
            delta_t: grid[best],
            message: e.to_string(),
        })?;
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    let state = result.state();
    let mut delta_t0 = state.best_param.unwrap_or(grid[best]);
    let mut value = -state.best_cost;
    evaluations += state.counts.values().sum::<u64>() as usize;
    if values[best] > value {
        delta_t0 = grid[best];
        value = values[best];
    }

    let h = 1e-3 * t_bar;
    let plus = objective_at(base, objective, delta_t0 + h, i3);
    let minus = objective_at(base, objective, delta_t0 - h, i3);
    evaluations += 2;
    let derivative = match (plus, minus) {
        (Ok(p), Ok(m)) => (p - m) / (2.0 * h),
        _ => f64::NAN,
    };
    Ok(CntdEntry {
        objective,
        delta_t0,
        value,
        derivative,
        stationary: derivative.abs() < DERIVATIVE_TOLERANCE,
        bracket,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nessie_core::Statistics;

    #[test]
    fn coarse_grid_is_open_and_symmetric() {
        let g = coarse_grid(0.4);
        assert_eq!(g.len(), COARSE_POINTS);
        assert!(g[0] > -0.8 && g[40] < 0.8);
        assert!(g[20].abs() < 1e-15);
    }

    #[test]
    fn local_maxima_handle_plateaus() {
        assert_eq!(local_maxima(&[0.0, 1.0, 1.0, 0.5, 2.0, 0.0]), vec![1, 4]);
        assert_eq!(local_maxima(&[0.0, 0.0, 0.0]), Vec::<usize>::new());
        let v = [0.0, 1.0, 0.99995, 1.0, 0.0];
        assert_eq!(separate_modes(&v, &local_maxima(&v)), None);
        let v = [0.0, 1.0, 0.5, 1.0, 0.0];
        assert_eq!(separate_modes(&v, &local_maxima(&v)), Some((1, 3)));
    }

    #[test]
    fn symmetric_system_peaks_at_equilibrium() {
        let s = Setup::symmetric(Statistics::Boson, 3.0, 0.4);
        let e = find_cntd(&s, Objective::Concurrence, &I3322Config::default()).unwrap();
        assert!(e.delta_t0.abs() < 1e-4 * 0.4, "{e:?}");
        assert!(e.stationary, "{e:?}");
    }

    #[test]
    fn weak_coupling_without_nonlocality_vanishes() {
        let s = Setup::symmetric(Statistics::Boson, 1.0, 0.4);
        assert_eq!(
            find_cntd(&s, Objective::I2, &I3322Config::default()),
            Err(CntdError::Vanishing)
        );
    }
}
