// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Steady-state currents, entropy production and rectification.
//!
//! A current is positive when energy (bosons) or particles (fermions) flow
//! from the reservoir into the system.

use crate::bath::{BathSpec, Statistics};
use crate::eigensystem::SystemParams;
use crate::error::{Error, Result};
use crate::linalg::{trace, Op4};
use crate::liouvillian::{Bath, OpenSystem};
use crate::steady_state::{solve_steady_state, SteadyState};

/// Both currents below this make the rectification ratio undefined.
pub const ZERO_CURRENT: f64 = 1e-14;

/// Which bias drives the currents and its value `X2 - X1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bias {
    Temperature(f64),
    ChemicalPotential(f64),
}

impl Bias {
    pub fn of(b1: &BathSpec, b2: &BathSpec) -> Self {
        match b1.statistics {
            Statistics::Boson => Bias::Temperature(b2.temperature - b1.temperature),
            Statistics::Fermion => Bias::ChemicalPotential(b2.chemical_potential - b1.chemical_potential),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Bias::Temperature(x) | Bias::ChemicalPotential(x) => x,
        }
    }

    /// `-1`, `0` or `1`.
    pub fn sign(self) -> i8 {
        let x = self.value();
        if x > 0.0 {
            1
        } else if x < 0.0 {
            -1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentReport {
    pub i1: f64,
    pub i2: f64,
    /// `|I1 + I2|`.
    pub balance: f64,
    pub sigma: f64,
    /// The entropy rate is even in the bias, so its sign is carried separately.
    pub sign_context: Bias,
}

fn expectation_change(sys: &OpenSystem, ss: &SteadyState, j: Bath, observable: &Op4) -> f64 {
    let d = sys.dissipator(j).apply(&ss.rho_energy.matrix);
    trace(&(d * observable)).re
}

/// `Tr(D_j[rho] H_S)`, evaluated in the energy basis.
pub fn heat_current(sys: &OpenSystem, ss: &SteadyState, j: Bath) -> f64 {
    expectation_change(sys, ss, j, &sys.eigensystem.hamiltonian())
}

/// `Tr(D_j[rho] N)`, evaluated in the energy basis.
pub fn particle_current(sys: &OpenSystem, ss: &SteadyState, j: Bath) -> f64 {
    expectation_change(sys, ss, j, &sys.eigensystem.number_operator())
}

/// Boson: `-I1/T1 - I2/T2`. Fermion: `(mu1 I1 + mu2 I2) / T`, defined only for
/// equal temperatures.
pub fn entropy_production(currents: [f64; 2], b1: &BathSpec, b2: &BathSpec) -> Result<f64> {
    if b1.statistics != b2.statistics {
        return Err(Error::MixedStatistics);
    }
    match b1.statistics {
        Statistics::Boson => Ok(-currents[0] / b1.temperature - currents[1] / b2.temperature),
        Statistics::Fermion => {
            if b1.temperature != b2.temperature {
                return Err(Error::FermionTemperatureMismatch {
                    t1: b1.temperature,
                    t2: b2.temperature,
                });
            }
            Ok((b1.chemical_potential * currents[0] + b2.chemical_potential * currents[1])
                / b1.temperature)
        }
    }
}

/// Heat currents for bosonic reservoirs and particle currents for fermionic ones.
pub fn current_report(sys: &OpenSystem, ss: &SteadyState) -> Result<CurrentReport> {
    let [b1, b2] = &sys.baths;
    let current = match b1.statistics {
        Statistics::Boson => heat_current,
        Statistics::Fermion => particle_current,
    };
    let i1 = current(sys, ss, Bath::One);
    let i2 = current(sys, ss, Bath::Two);
    Ok(CurrentReport {
        i1,
        i2,
        balance: (i1 + i2).abs(),
        sigma: entropy_production([i1, i2], b1, b2)?,
        sign_context: Bias::of(b1, b2),
    })
}

/// `(I2(+) + I2(-)) / max(|I2(+)|, |I2(-)|)`.
pub fn rectification_from_currents(forward: f64, backward: f64) -> Result<f64> {
    let denom = forward.abs().max(backward.abs());
    if denom < ZERO_CURRENT {
        return Err(Error::ZeroCurrent);
    }
    Ok((forward + backward) / denom)
}

/// Rectification ratio from the bath-2 currents of two steady states, one
/// with the bias reversed.
pub fn rectification_ratio(
    p: &SystemParams,
    forward: [&BathSpec; 2],
    backward: [&BathSpec; 2],
) -> Result<f64> {
    let i2 = |b: [&BathSpec; 2]| -> Result<f64> {
        let sys = OpenSystem::new(p, b[0], b[1])?;
        let ss = solve_steady_state(&sys.liouvillian, &sys.eigensystem)?;
        Ok(current_report(&sys, &ss)?.i2)
    };
    rectification_from_currents(i2(forward)?, i2(backward)?)
}
