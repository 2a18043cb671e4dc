// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Nonequilibrium steady states of two coupled qubits, each attached to its
//! own bosonic or fermionic reservoir, under the Bloch-Redfield master
//! equation; plus the correlation and transport quantities evaluated on them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bath;
pub mod eigensystem;
pub mod error;
pub mod linalg;
pub mod liouvillian;
pub mod optim;
pub mod steady_state;
pub mod thermodynamics;
pub mod correlations;

pub use bath::{occupation, BathSpec, Rates, Statistics};
pub use eigensystem::{build_eigensystem, build_hamiltonian, CouplingRegime, EigenSystem, SystemParams};
pub use error::{Error, Result};
pub use linalg::Op4;
pub use liouvillian::{
    build_dissipator, build_liouvillian, Bath, DissipatorForm, Liouvillian, OpenSystem,
};
pub use steady_state::{propagate, solve_steady_state, Basis, DensityMatrix4, SteadyState};
pub use correlations::{
    bell_operator_3322, chsh_max, chsh_optimal, concurrence, i2, i3322_max, BellResult,
    CorrelationData, HorodeckiBranch, I3322Config, Observable, XState,
};
pub use thermodynamics::{
    current_report, entropy_production, heat_current, particle_current, rectification_from_currents,
    rectification_ratio, Bias, CurrentReport,
};
