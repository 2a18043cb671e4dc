// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    /// kappa sits on the weak/strong boundary kappa = 2 sqrt(eps1 eps2).
    #[error("inter-qubit coupling {kappa} is on the regime boundary {boundary}")]
    DegenerateCoupling { kappa: f64, boundary: f64 },

    #[error("bosonic occupation requested at non-positive frequency {omega}")]
    NonPositiveBosonFrequency { omega: f64 },

    #[error("baths must share the same statistics")]
    MixedStatistics,

    #[error("fermionic reservoirs are only supported for weakly coupled qubits")]
    UnsupportedRegime,

    #[error("steady state is not unique: second-smallest singular value {ratio:e} of sigma_max")]
    DegenerateSteadyState { ratio: f64 },

    #[error("steady state has eigenvalue {min_eigenvalue:e} below the positivity tolerance")]
    NonPhysical { min_eigenvalue: f64 },

    #[error("propagator failed: {0}")]
    StepFailure(&'static str),

    #[error("state is not X-shaped: largest entry outside the X pattern is {max_entry:e}")]
    StructureViolation { max_entry: f64 },

    #[error("fermionic entropy production requires T1 == T2 (got {t1} and {t2})")]
    FermionTemperatureMismatch { t1: f64, t2: f64 },

    #[error("both bath-2 currents vanish; rectification ratio undefined")]
    ZeroCurrent,
}
