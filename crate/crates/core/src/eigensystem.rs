// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Hamiltonian with flip-flop coupling, its eigenbasis, and the
//! transition operators the reservoirs act through.
//!
//! Local product basis ordering is `|00>, |01>, |10>, |11>` (first label is
//! qubit 1). The eigenstates are
//!
//! ```text
//! |1> = |00>                          E1 = -eps_bar
//! |2> = cos t |01> - sin t |10>       E2 = -Omega
//! |3> = sin t |01> + cos t |10>       E3 =  Omega
//! |4> = |11>                          E4 =  eps_bar
//! ```
//!
//! with `Omega = sqrt(delta_eps^2 + kappa^2) / 2`.

use core::f64::consts::FRAC_PI_4;

use libm::{atan2, cos, sin, sqrt};

use crate::error::{Error, Result};
use crate::linalg::{c, ket_bra, Op4};

/// Relative width of the excluded band around `kappa = 2 sqrt(eps1 eps2)`.
pub const REGIME_BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Qubit frequencies and inter-qubit coupling, in units with hbar = k_B = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub eps1: f64,
    pub eps2: f64,
    pub kappa: f64,
}

impl SystemParams {
    pub fn new(eps1: f64, eps2: f64, kappa: f64) -> Result<Self> {
        let p = Self { eps1, eps2, kappa };
        p.validate()?;
        Ok(p)
    }

    /// Builds from the mean frequency and the detuning `eps2 - eps1`.
    pub fn from_mean(eps_bar: f64, delta_eps: f64, kappa: f64) -> Result<Self> {
        Self::new(eps_bar - delta_eps / 2.0, eps_bar + delta_eps / 2.0, kappa)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite and > 0",
                })
            }
        };
        positive("eps1", self.eps1)?;
        positive("eps2", self.eps2)?;
        positive("kappa", self.kappa)
    }

    pub fn eps_bar(&self) -> f64 {
        0.5 * (self.eps1 + self.eps2)
    }

    pub fn delta_eps(&self) -> f64 {
        self.eps2 - self.eps1
    }

    pub fn omega(&self) -> f64 {
        let d = self.delta_eps();
        0.5 * sqrt(d * d + self.kappa * self.kappa)
    }

    /// `2 sqrt(eps1 eps2)`, the coupling at which `Omega = eps_bar`.
    pub fn regime_boundary(&self) -> f64 {
        2.0 * sqrt(self.eps1 * self.eps2)
    }

    pub fn regime(&self) -> Result<CouplingRegime> {
        let boundary = self.regime_boundary();
        if (self.kappa - boundary).abs() <= REGIME_BOUNDARY_TOLERANCE * boundary {
            return Err(Error::DegenerateCoupling {
                kappa: self.kappa,
                boundary,
            });
        }
        Ok(if self.kappa < boundary {
            CouplingRegime::Weak
        } else {
            CouplingRegime::Strong
        })
    }

    /// Detuning angle in `(0, pi/2)`; `pi/4` for identical qubits.
    ///
    /// `atan2(kappa, -delta_eps) / 2` reproduces both branches
    /// `atan(-kappa/delta_eps)/2` (detuning < 0) and `atan(-kappa/delta_eps)/2 + pi/2`
    /// (detuning > 0) and is continuous through zero detuning.
    pub fn theta(&self) -> f64 {
        let d = self.delta_eps();
        if d == 0.0 {
            return FRAC_PI_4;
        }
        0.5 * atan2(self.kappa, -d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingRegime {
    /// `kappa < 2 sqrt(eps1 eps2)`: ordering E1 < E2 < E3 < E4, product ground state.
    Weak,
    /// `kappa > 2 sqrt(eps1 eps2)`: ordering E2 < E1 < E4 < E3, entangled ground state.
    Strong,
}

/// `H_S` in the local product basis.
pub fn build_hamiltonian(p: &SystemParams) -> Op4 {
    let mut h = Op4::zeros();
    h[(0, 0)] = c(-p.eps_bar());
    h[(1, 1)] = c(0.5 * p.delta_eps());
    h[(2, 2)] = c(-0.5 * p.delta_eps());
    h[(3, 3)] = c(p.eps_bar());
    h[(1, 2)] = c(0.5 * p.kappa);
    h[(2, 1)] = c(0.5 * p.kappa);
    h
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub params: SystemParams,
    /// `[E1, E2, E3, E4] = [-eps_bar, -Omega, Omega, eps_bar]`.
    pub energies: [f64; 4],
    pub theta: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
    pub regime: CouplingRegime,
    /// Transition operators at frequency `eps_minus`, one per qubit, energy basis.
    pub eta: [Op4; 2],
    /// Transition operators at frequency `eps_plus`, one per qubit, energy basis.
    pub xi: [Op4; 2],
    /// Columns are the eigenstates `|1>..|4>` written in the local basis.
    pub local_to_energy: Op4,
}

pub fn build_eigensystem(p: &SystemParams) -> Result<EigenSystem> {
    p.validate()?;
    let regime = p.regime()?;
    let (eps_bar, omega, theta) = (p.eps_bar(), p.omega(), p.theta());
    let (s, co) = (sin(theta), cos(theta));

    let mut u = Op4::zeros();
    u[(0, 0)] = c(1.0);
    u[(1, 1)] = c(co);
    u[(2, 1)] = c(-s);
    u[(1, 2)] = c(s);
    u[(2, 2)] = c(co);
    u[(3, 3)] = c(1.0);

    // energy-basis indices: |1> -> 0, |2> -> 1, |3> -> 2, |4> -> 3
    let k = ket_bra;
    let xi = [
        (k(1, 3) + k(0, 2)) * c(co),
        (k(0, 2) - k(1, 3)) * c(s),
    ];
    let (eta, eps_plus, eps_minus) = match regime {
        CouplingRegime::Weak => (
            [
                (k(2, 3) - k(0, 1)) * c(s),
                (k(2, 3) + k(0, 1)) * c(co),
            ],
            eps_bar + omega,
            eps_bar - omega,
        ),
        CouplingRegime::Strong => (
            [
                (k(3, 2) - k(1, 0)) * c(s),
                (k(3, 2) + k(1, 0)) * c(co),
            ],
            omega + eps_bar,
            omega - eps_bar,
        ),
    };

    Ok(EigenSystem {
        params: *p,
        energies: [-eps_bar, -omega, omega, eps_bar],
        theta,
        eps_plus,
        eps_minus,
        regime,
        eta,
        xi,
        local_to_energy: u,
    })
}

impl EigenSystem {
    /// `H_S` in the energy basis.
    pub fn hamiltonian(&self) -> Op4 {
        Op4::from_diagonal(&self.energies.map(c).into())
    }

    /// Particle number `|2><2| + |3><3| + 2|4><4|`; diagonal in both bases.
    pub fn number_operator(&self) -> Op4 {
        Op4::from_diagonal(&[0.0, 1.0, 1.0, 2.0].map(c).into())
    }

    pub fn to_local(&self, energy: &Op4) -> Op4 {
        self.local_to_energy * energy * self.local_to_energy.adjoint()
    }

    pub fn to_energy(&self, local: &Op4) -> Op4 {
        self.local_to_energy.adjoint() * local * self.local_to_energy
    }
}
