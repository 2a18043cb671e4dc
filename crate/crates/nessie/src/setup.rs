// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Mean-plus-difference parametrization of a two-qubit, two-reservoir run.
//!
//! Every pair `(x1, x2)` is stored as `x_bar = (x1 + x2) / 2` and
//! `delta_x = x2 - x1`, so `x1 = x_bar - delta_x / 2` and `x2 = x_bar + delta_x / 2`.

use core::fmt;
use std::str::FromStr;

use nessie_core::{BathSpec, Result as CoreResult, Statistics, SystemParams};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(remote = "Statistics", rename_all = "lowercase")]
enum StatisticsDef {
    Boson,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Setup {
    #[serde(with = "StatisticsDef")]
    pub statistics: Statistics,
    pub eps_bar: f64,
    pub delta_eps: f64,
    pub kappa: f64,
    pub t_bar: f64,
    pub delta_t: f64,
    pub mu_bar: f64,
    pub delta_mu: f64,
    pub gamma_bar: f64,
    pub delta_gamma: f64,
}

impl Setup {
    /// Symmetric qubits with `eps_bar = 1`, equal couplings `0.1` and no bias.
    pub fn symmetric(statistics: Statistics, kappa: f64, t_bar: f64) -> Self {
        Self {
            statistics,
            eps_bar: 1.0,
            delta_eps: 0.0,
            kappa,
            t_bar,
            delta_t: 0.0,
            mu_bar: 0.0,
            delta_mu: 0.0,
            gamma_bar: 0.1,
            delta_gamma: 0.0,
        }
    }

    pub fn eps(&self) -> (f64, f64) {
        split(self.eps_bar, self.delta_eps)
    }

    pub fn temperatures(&self) -> (f64, f64) {
        split(self.t_bar, self.delta_t)
    }

    pub fn chemical_potentials(&self) -> (f64, f64) {
        split(self.mu_bar, self.delta_mu)
    }

    pub fn gammas(&self) -> (f64, f64) {
        split(self.gamma_bar, self.delta_gamma)
    }

    pub fn system_params(&self) -> CoreResult<SystemParams> {
        let (e1, e2) = self.eps();
        SystemParams::new(e1, e2, self.kappa)
    }

    pub fn baths(&self) -> CoreResult<[BathSpec; 2]> {
        let (t1, t2) = self.temperatures();
        let (m1, m2) = self.chemical_potentials();
        let (g1, g2) = self.gammas();
        Ok([
            BathSpec::new(self.statistics, t1, m1, g1)?,
            BathSpec::new(self.statistics, t2, m2, g2)?,
        ])
    }

    /// The bias that drives transport: `delta_t` for bosons, `delta_mu` for fermions.
    pub fn bias(&self) -> f64 {
        match self.statistics {
            Statistics::Boson => self.delta_t,
            Statistics::Fermion => self.delta_mu,
        }
    }

    /// Same setup with the transport bias reversed.
    pub fn reversed_bias(&self) -> Self {
        let mut s = *self;
        match s.statistics {
            Statistics::Boson => s.delta_t = -s.delta_t,
            Statistics::Fermion => s.delta_mu = -s.delta_mu,
        }
        s
    }

    /// Same setup with qubit and reservoir labels exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            delta_eps: -self.delta_eps,
            delta_t: -self.delta_t,
            delta_mu: -self.delta_mu,
            delta_gamma: -self.delta_gamma,
            ..*self
        }
    }

    pub fn with(&self, axis: Axis, value: f64) -> Self {
        let mut s = *self;
        match axis {
            Axis::T => s.t_bar = value,
            Axis::Mu => s.mu_bar = value,
            Axis::DeltaT => s.delta_t = value,
            Axis::DeltaMu => s.delta_mu = value,
            Axis::DeltaEps => s.delta_eps = value,
            Axis::DeltaGamma => s.delta_gamma = value,
            Axis::Kappa => s.kappa = value,
        }
        s
    }
}

fn split(mean: f64, delta: f64) -> (f64, f64) {
    (mean - delta / 2.0, mean + delta / 2.0)
}

/// A sweepable parameter. `T` and `mu` move the mean with the difference held.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "T")]
    T,
    #[serde(rename = "mu")]
    Mu,
    #[serde(rename = "dT")]
    DeltaT,
    #[serde(rename = "dmu")]
    DeltaMu,
    #[serde(rename = "deps")]
    DeltaEps,
    #[serde(rename = "dgamma")]
    DeltaGamma,
    #[serde(rename = "kappa")]
    Kappa,
}

impl Axis {
    pub const ALL: [Axis; 7] = [
        Axis::T,
        Axis::Mu,
        Axis::DeltaT,
        Axis::DeltaMu,
        Axis::DeltaEps,
        Axis::DeltaGamma,
        Axis::Kappa,
    ];

    /// Column name in tables.
    pub fn name(self) -> &'static str {
        match self {
            Axis::T => "T",
            Axis::Mu => "mu",
            Axis::DeltaT => "dT",
            Axis::DeltaMu => "dmu",
            Axis::DeltaEps => "deps",
            Axis::DeltaGamma => "dgamma",
            Axis::Kappa => "kappa",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown axis `{s}`"))
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|k| {
                    if k == n - 1 {
                        self.stop
                    } else {
                        self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_difference_convention() {
        let s = Setup {
            delta_t: 0.2,
            delta_eps: 1.0,
            ..Setup::symmetric(Statistics::Boson, 3.0, 0.4)
        };
        assert_eq!(s.temperatures(), (0.30000000000000004, 0.5));
        assert_eq!(s.eps(), (0.5, 1.5));
        let b = s.baths().unwrap();
        assert!(b[1].temperature > b[0].temperature);
    }

    #[test]
    fn axis_updates_hold_the_mean() {
        let s = Setup::symmetric(Statistics::Boson, 3.0, 0.4).with(Axis::DeltaT, 0.6);
        let (t1, t2) = s.temperatures();
        assert!(((t1 + t2) / 2.0 - 0.4).abs() < 1e-15);
        assert!((t2 - t1 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn reversing_twice_is_identity() {
        let s = Setup {
            delta_mu: 0.3,
            ..Setup::symmetric(Statistics::Fermion, 0.6, 0.15)
        };
        assert_eq!(s.reversed_bias().delta_mu, -0.3);
        assert_eq!(s.reversed_bias().reversed_bias(), s);
    }

    #[test]
    fn ranges_include_both_ends() {
        let r = Range {
            start: -0.8,
            stop: 0.8,
            points: 201,
        };
        let v = r.values();
        assert_eq!(v.len(), 201);
        assert_eq!(v[0], -0.8);
        assert_eq!(v[200], 0.8);
        assert!(v[100].abs() < 1e-15);
    }

    #[test]
    fn axis_names_round_trip() {
        for a in Axis::ALL {
            assert_eq!(a.name().parse::<Axis>().unwrap(), a);
        }
        assert!("dX".parse::<Axis>().is_err());
    }
}
