// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reservoir description, occupation numbers and dissipation rates.

use libm::{exp, expm1};

use crate::eigensystem::EigenSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

/// One reservoir: statistics, temperature, chemical potential and the
/// (frequency-independent) coupling spectrum value `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub statistics: Statistics,
    pub temperature: f64,
    pub chemical_potential: f64,
    pub gamma: f64,
}

impl BathSpec {
    pub fn new(statistics: Statistics, temperature: f64, chemical_potential: f64, gamma: f64) -> Result<Self> {
        let b = Self {
            statistics,
            temperature,
            chemical_potential,
            gamma,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn boson(temperature: f64, gamma: f64) -> Result<Self> {
        Self::new(Statistics::Boson, temperature, 0.0, gamma)
    }

    pub fn fermion(temperature: f64, chemical_potential: f64, gamma: f64) -> Result<Self> {
        Self::new(Statistics::Fermion, temperature, chemical_potential, gamma)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::InvalidParameter {
                name: "temperature",
                reason: "must be finite and > 0",
            });
        }
        // gamma = 0 is allowed: it decouples the reservoir entirely.
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "must be finite and >= 0",
            });
        }
        if !self.chemical_potential.is_finite() {
            return Err(Error::InvalidParameter {
                name: "chemical_potential",
                reason: "must be finite",
            });
        }
        if self.statistics == Statistics::Boson && self.chemical_potential != 0.0 {
            return Err(Error::InvalidParameter {
                name: "chemical_potential",
                reason: "bosonic reservoirs have zero chemical potential",
            });
        }
        Ok(())
    }
}

/// Bose-Einstein or Fermi-Dirac occupation `1 / (exp((omega - mu) / T) -/+ 1)`.
pub fn occupation(b: &BathSpec, omega: f64) -> Result<f64> {
    let x = (omega - b.chemical_potential) / b.temperature;
    match b.statistics {
        Statistics::Boson => {
            if !(omega > 0.0) {
                return Err(Error::NonPositiveBosonFrequency { omega });
            }
            Ok(1.0 / expm1(x))
        }
        Statistics::Fermion => {
            // evaluate on the side where exp cannot overflow
            if x >= 0.0 {
                let e = exp(-x);
                Ok(e / (1.0 + e))
            } else {
                Ok(1.0 / (exp(x) + 1.0))
            }
        }
    }
}

/// Absorption (`alpha`) and emission (`beta`) rates of one reservoir at the two
/// transition frequencies of the system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub beta_minus: f64,
    pub beta_plus: f64,
}

impl Rates {
    pub fn new(b: &BathSpec, es: &EigenSystem) -> Result<Self> {
        let pair = |omega| -> Result<(f64, f64)> {
            let n = occupation(b, omega)?;
            let emission = match b.statistics {
                Statistics::Boson => 1.0 + n,
                Statistics::Fermion => 1.0 - n,
            };
            Ok((b.gamma * n, b.gamma * emission))
        };
        let (alpha_minus, beta_minus) = pair(es.eps_minus)?;
        let (alpha_plus, beta_plus) = pair(es.eps_plus)?;
        Ok(Self {
            alpha_minus,
            alpha_plus,
            beta_minus,
            beta_plus,
        })
    }
}
