// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Everything computed at a single parameter point.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nessie_core::correlations::{concurrence, horodecki_m, i3322_max, HorodeckiBranch, XState};
use nessie_core::thermodynamics::{current_report, rectification_ratio};
use nessie_core::{solve_steady_state, I3322Config, OpenSystem, Statistics};
use serde::{Deserialize, Serialize};

use crate::setup::Setup;

/// Quantities a run can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "C")]
    Concurrence,
    #[serde(rename = "I2")]
    I2,
    #[serde(rename = "I3")]
    I3,
    #[serde(rename = "R")]
    Rectification,
    #[serde(rename = "current1")]
    Current1,
    #[serde(rename = "current2")]
    Current2,
    #[serde(rename = "sigma")]
    Sigma,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Concurrence,
        Quantity::I2,
        Quantity::I3,
        Quantity::Rectification,
        Quantity::Current1,
        Quantity::Current2,
        Quantity::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Concurrence => "C",
            Quantity::I2 => "I2",
            Quantity::I3 => "I3",
            Quantity::Rectification => "R",
            Quantity::Current1 => "current1",
            Quantity::Current2 => "current2",
            Quantity::Sigma => "sigma",
        }
    }

    /// Table column name; the entropy rate is tagged with the reservoir type.
    pub fn column(self, statistics: Statistics) -> &'static str {
        match (self, statistics) {
            (Quantity::Sigma, Statistics::Boson) => "sigma_b",
            (Quantity::Sigma, Statistics::Fermion) => "sigma_f",
            (q, _) => q.name(),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| format!("unknown observable `{s}`"))
    }
}

pub type QuantitySet = BTreeSet<Quantity>;

/// Default request: everything except the rectification ratio, which needs a
/// second steady state.
pub fn default_quantities() -> QuantitySet {
    Quantity::ALL
        .into_iter()
        .filter(|q| *q != Quantity::Rectification)
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointValues {
    pub concurrence: Option<f64>,
    pub i2: Option<f64>,
    pub i3: Option<f64>,
    pub rectification: Option<f64>,
    pub current1: Option<f64>,
    pub current2: Option<f64>,
    pub sigma: Option<f64>,
    /// `|I1 + I2|`, present whenever currents were computed.
    pub balance: Option<f64>,
    pub branch: Option<HorodeckiBranch>,
    pub i3_spread: Option<f64>,
    pub min_eig: Option<f64>,
    pub residual: Option<f64>,
    pub errors: Vec<String>,
}

impl PointValues {
    pub fn get(&self, q: Quantity) -> Option<f64> {
        match q {
            Quantity::Concurrence => self.concurrence,
            Quantity::I2 => self.i2,
            Quantity::I3 => self.i3,
            Quantity::Rectification => self.rectification,
            Quantity::Current1 => self.current1,
            Quantity::Current2 => self.current2,
            Quantity::Sigma => self.sigma,
        }
    }

    pub fn error_text(&self) -> String {
        self.errors.join("; ")
    }
}

/// Failure that prevents any observable at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub error: nessie_core::Error,
}

impl fmt::Display for PointFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.error)
    }
}

/// Solves the steady state and evaluates the requested quantities. Partial
/// failures (e.g. a vanishing current for `R`) are recorded in `errors`.
pub fn evaluate(setup: &Setup, quantities: &QuantitySet, i3: &I3322Config) -> Result<PointValues, PointFailure> {
    let fail = |error| PointFailure { error };
    let p = setup.system_params().map_err(fail)?;
    let [b1, b2] = setup.baths().map_err(fail)?;
    let sys = OpenSystem::new(&p, &b1, &b2).map_err(fail)?;
    let ss = solve_steady_state(&sys.liouvillian, &sys.eigensystem).map_err(fail)?;

    let mut out = PointValues {
        min_eig: Some(ss.min_eigenvalue),
        residual: Some(ss.residual),
        ..PointValues::default()
    };
    let wants = |q| quantities.contains(&q);

    if wants(Quantity::Concurrence) || wants(Quantity::I2) {
        match XState::from_density(&ss.rho_local) {
            Ok(x) => {
                if wants(Quantity::Concurrence) {
                    out.concurrence = Some(concurrence(&x));
                }
                if wants(Quantity::I2) {
                    let (m, branch) = horodecki_m(&x);
                    out.i2 = Some(nessie_core::correlations::chsh_violation(2.0 * m.sqrt()));
                    out.branch = Some(branch);
                }
            }
            Err(e) => out.errors.push(format!("X-state: {e}")),
        }
    }
    if wants(Quantity::I3) {
        match i3322_max(&ss.rho_local, i3) {
            Ok(r) => {
                out.i3 = Some(r.value);
                out.i3_spread = Some(r.diagnostics.spread);
                if !r.diagnostics.converged {
                    out.errors.push(format!(
                        "I3: restart spread {:.3e} above threshold",
                        r.diagnostics.spread
                    ));
                }
            }
            Err(e) => out.errors.push(format!("I3: {e}")),
        }
    }
    if wants(Quantity::Current1) || wants(Quantity::Current2) || wants(Quantity::Sigma) {
        match current_report(&sys, &ss) {
            Ok(r) => {
                if wants(Quantity::Current1) {
                    out.current1 = Some(r.i1);
                }
                if wants(Quantity::Current2) {
                    out.current2 = Some(r.i2);
                }
                if wants(Quantity::Sigma) {
                    out.sigma = Some(r.sigma);
                }
                out.balance = Some(r.balance);
            }
            Err(e) => out.errors.push(format!("currents: {e}")),
        }
    }
    if wants(Quantity::Rectification) {
        match rectification(setup) {
            Ok(r) => out.rectification = Some(r),
            Err(e) => out.errors.push(format!("R: {e}")),
        }
    }
    Ok(out)
}

/// Rectification ratio at the setup's bias magnitude.
pub fn rectification(setup: &Setup) -> nessie_core::Result<f64> {
    let p = setup.system_params()?;
    let forward = setup.baths()?;
    let backward = setup.reversed_bias().baths()?;
    rectification_ratio(&p, [&forward[0], &forward[1]], [&backward[0], &backward[1]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_point_has_all_values() {
        let s = Setup::symmetric(Statistics::Boson, 3.0, 0.5);
        let cfg = I3322Config {
            restarts: 20,
            ..I3322Config::default()
        };
        let v = evaluate(&s, &default_quantities(), &cfg).unwrap();
        assert!(v.concurrence.unwrap() > 0.0);
        assert!(v.i2.is_some() && v.i3.is_some());
        assert!(v.sigma.unwrap().abs() < 1e-12);
        assert!(v.current1.unwrap().abs() < 1e-12);
        assert!(v.errors.is_empty(), "{:?}", v.errors);
    }

    #[test]
    fn rectification_without_bias_is_a_partial_failure() {
        let s = Setup::symmetric(Statistics::Boson, 3.0, 0.5);
        let q: QuantitySet = [Quantity::Concurrence, Quantity::Rectification].into();
        let v = evaluate(&s, &q, &I3322Config::default()).unwrap();
        assert!(v.concurrence.is_some());
        assert!(v.rectification.is_none());
        assert!(v.error_text().starts_with("R:"));
    }

    #[test]
    fn invalid_temperature_fails_the_point() {
        let s = Setup {
            delta_t: 1.0,
            ..Setup::symmetric(Statistics::Boson, 3.0, 0.4)
        };
        assert!(evaluate(&s, &default_quantities(), &I3322Config::default()).is_err());
    }

    #[test]
    fn quantity_names_round_trip() {
        for q in Quantity::ALL {
            assert_eq!(q.name().parse::<Quantity>().unwrap(), q);
        }
        assert_eq!(Quantity::Sigma.column(Statistics::Fermion), "sigma_f");
    }
}
