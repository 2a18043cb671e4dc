// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Entanglement and Bell nonlocality of two-qubit states.
//!
//! All functions expect density matrices in the local product basis, with
//! qubit 1 held by Alice and qubit 2 by Bob.

mod i3322;
mod observable;

pub use i3322::{
    bell_operator_3322, bell_operator_3322_ops, i3322_max, i3322_max_from_correlations, I3322Config,
    LOCAL_BOUND,
};
pub use observable::Observable;

use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;
use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{kron2, pauli, Op2, Real3};
use crate::steady_state::{Basis, DensityMatrix4};

/// Largest entry allowed outside the X pattern before a state is rejected.
pub const X_STRUCTURE_TOLERANCE: f64 = 1e-8;

/// A two-qubit X state in the local basis: populations plus the two
/// anti-diagonal coherences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub p11: f64,
    pub p22: f64,
    pub p33: f64,
    pub p44: f64,
    pub r14: Complex64,
    pub r23: Complex64,
}

impl XState {
    pub fn from_density(rho: &DensityMatrix4) -> Result<Self> {
        if rho.basis != Basis::Local {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: "X-state extraction needs the local basis",
            });
        }
        let m = &rho.matrix;
        let mut outside: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if r != c && r + c != 3 {
                    outside = outside.max(m[(r, c)].norm());
                }
            }
        }
        if outside > X_STRUCTURE_TOLERANCE {
            return Err(Error::StructureViolation { max_entry: outside });
        }
        Ok(Self {
            p11: m[(0, 0)].re,
            p22: m[(1, 1)].re,
            p33: m[(2, 2)].re,
            p44: m[(3, 3)].re,
            r14: m[(0, 3)],
            r23: m[(1, 2)],
        })
    }

    pub fn to_density(&self) -> DensityMatrix4 {
        let mut m = crate::linalg::Op4::zeros();
        m[(0, 0)] = Complex64::new(self.p11, 0.0);
        m[(1, 1)] = Complex64::new(self.p22, 0.0);
        m[(2, 2)] = Complex64::new(self.p33, 0.0);
        m[(3, 3)] = Complex64::new(self.p44, 0.0);
        m[(0, 3)] = self.r14;
        m[(3, 0)] = self.r14.conj();
        m[(1, 2)] = self.r23;
        m[(2, 1)] = self.r23.conj();
        DensityMatrix4::new(m, Basis::Local)
    }
}

/// Wootters concurrence of an X state.
pub fn concurrence(x: &XState) -> f64 {
    let a = x.r23.norm() - sqrt((x.p11 * x.p44).max(0.0));
    let b = x.r14.norm() - sqrt((x.p22 * x.p33).max(0.0));
    2.0 * a.max(b).max(0.0)
}

/// Which term of the Horodecki function attains the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HorodeckiBranch {
    /// `8 (|r14|^2 + |r23|^2)`.
    Coherence,
    /// `(p11 + p44 - p22 - p33)^2 + 4 (|r23| + |r14|)^2`.
    Population,
}

impl HorodeckiBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            HorodeckiBranch::Coherence => "coherence",
            HorodeckiBranch::Population => "population",
        }
    }
}

/// `M(rho)` for an X state and the branch that attains it.
pub fn horodecki_m(x: &XState) -> (f64, HorodeckiBranch) {
    let (a, b) = (x.r14.norm(), x.r23.norm());
    let coherence = 8.0 * (a * a + b * b);
    let imbalance = x.p11 + x.p44 - x.p22 - x.p33;
    let population = imbalance * imbalance + 4.0 * (a + b) * (a + b);
    if coherence >= population {
        (coherence, HorodeckiBranch::Coherence)
    } else {
        (population, HorodeckiBranch::Population)
    }
}

/// Maximal CHSH expectation `2 sqrt(M)` over all dichotomic qubit observables.
pub fn chsh_max(x: &XState) -> f64 {
    2.0 * sqrt(horodecki_m(x).0)
}

/// Normalized CHSH violation `max{0, (B_max - 2) / (2 sqrt 2 - 2)}`.
pub fn chsh_violation(raw: f64) -> f64 {
    ((raw - 2.0) / (2.0 * core::f64::consts::SQRT_2 - 2.0)).max(0.0)
}

/// `I_2` of an X state.
pub fn i2(x: &XState) -> f64 {
    chsh_violation(chsh_max(x))
}

/// Local Bloch vectors and correlation tensor:
/// `alice_i = Tr(rho sigma_i ⊗ 1)`, `bob_j = Tr(rho 1 ⊗ sigma_j)`,
/// `t_ij = Tr(rho sigma_i ⊗ sigma_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationData {
    pub alice: Vector3<f64>,
    pub bob: Vector3<f64>,
    pub t: Real3,
}

impl CorrelationData {
    pub fn from_density(rho: &DensityMatrix4) -> Result<Self> {
        if rho.basis != Basis::Local {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: "correlation data needs the local basis",
            });
        }
        let s = pauli();
        let id = Op2::identity();
        let expect = |a: &Op2, b: &Op2| (rho.matrix * kron2(a, b)).trace().re;
        Ok(Self {
            alice: Vector3::from_fn(|i, _| expect(&s[i], &id)),
            bob: Vector3::from_fn(|j, _| expect(&id, &s[j])),
            t: Real3::from_fn(|i, j| expect(&s[i], &s[j])),
        })
    }

    /// `<A ⊗ B>` for observables with Bloch vectors `a`, `b`.
    pub fn correlator(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        a.dot(&(self.t * b))
    }
}

/// Result of a Bell-functional maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct BellResult {
    /// Normalized violation (`I_2` or `I_3`), never negative.
    pub value: f64,
    /// Maximal expectation value of the Bell operator itself.
    pub raw: f64,
    /// Alice's observables followed by Bob's.
    pub optimal_observables: Vec<Observable>,
    pub diagnostics: OptimizerDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerDiagnostics {
    pub restarts: usize,
    pub best_objective: f64,
    /// Gap between the best restart and the worst restart of the top decile.
    pub spread: f64,
    /// `false` when the spread exceeds the convergence threshold.
    pub converged: bool,
}

/// Maximal CHSH value of an arbitrary two-qubit state with an optimal set of
/// observables, from the two largest eigenvalues of `T^T T`.
pub fn chsh_optimal(rho: &DensityMatrix4) -> Result<BellResult> {
    let cd = CorrelationData::from_density(rho)?;
    let tt = cd.t.transpose() * cd.t;
    let eig = tt.symmetric_eigen();
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let (l1, l2) = (eig.eigenvalues[idx[0]].max(0.0), eig.eigenvalues[idx[1]].max(0.0));
    let c1: Vector3<f64> = eig.eigenvectors.column(idx[0]).into();
    let c2: Vector3<f64> = eig.eigenvectors.column(idx[1]).into();
    let raw = 2.0 * sqrt(l1 + l2);

    // B1 + B2 = 2 cos(t) c1, B1 - B2 = 2 sin(t) c2 with tan t = |T c2| / |T c1|
    let (n1, n2) = (sqrt(l1), sqrt(l2));
    let norm = sqrt(l1 + l2);
    let (cos_t, sin_t) = if norm > 0.0 { (n1 / norm, n2 / norm) } else { (1.0, 0.0) };
    let unit_or_z = |v: Vector3<f64>| {
        let n = v.norm();
        if n > 0.0 {
            v / n
        } else {
            Vector3::z()
        }
    };
    let a1 = unit_or_z(cd.t * c1);
    let a2 = unit_or_z(cd.t * c2);
    let b1 = c1 * cos_t + c2 * sin_t;
    let b2 = c1 * cos_t - c2 * sin_t;
    let observables = vec![
        Observable::from_vector(&a1),
        Observable::from_vector(&a2),
        Observable::from_vector(&b1),
        Observable::from_vector(&b2),
    ];
    Ok(BellResult {
        value: chsh_violation(raw),
        raw,
        optimal_observables: observables,
        diagnostics: OptimizerDiagnostics {
            restarts: 0,
            best_objective: raw,
            spread: 0.0,
            converged: true,
        },
    })
}

/// `<A1 ⊗ (B1 + B2) + A2 ⊗ (B1 - B2)>` for explicit observables.
pub fn chsh_expectation(rho: &DensityMatrix4, a: [&Observable; 2], b: [&Observable; 2]) -> f64 {
    let (a1, a2) = (a[0].operator(), a[1].operator());
    let (b1, b2) = (b[0].operator(), b[1].operator());
    let op = kron2(&a1, &(b1 + b2)) + kron2(&a2, &(b1 - b2));
    (rho.matrix * op).trace().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Op4;
    use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn bell_singlet() -> XState {
        XState {
            p11: 0.0,
            p22: 0.5,
            p33: 0.5,
            p44: 0.0,
            r14: Complex64::new(0.0, 0.0),
            r23: Complex64::new(-0.5, 0.0),
        }
    }

    /// `p1 |1><1| + p2 |2><2|` for identical qubits, written out in the local basis.
    fn thermal_mixture(p2: f64) -> XState {
        XState {
            p11: 1.0 - p2,
            p22: p2 / 2.0,
            p33: p2 / 2.0,
            p44: 0.0,
            r14: Complex64::new(0.0, 0.0),
            r23: Complex64::new(-p2 / 2.0, 0.0),
        }
    }

    #[test]
    fn bell_state_is_maximal() {
        let x = bell_singlet();
        assert!((concurrence(&x) - 1.0).abs() < 1e-15);
        assert!((chsh_max(&x) - 2.0 * SQRT_2).abs() < 1e-14);
        assert!((i2(&x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_states_have_no_correlations() {
        let x = XState {
            p11: 0.1 * 0.3,
            p22: 0.1 * 0.7,
            p33: 0.9 * 0.3,
            p44: 0.9 * 0.7,
            r14: Complex64::new(0.0, 0.0),
            r23: Complex64::new(0.0, 0.0),
        };
        assert_eq!(concurrence(&x), 0.0);
        assert_eq!(i2(&x), 0.0);
    }

    #[test]
    fn concurrence_of_thermal_mixture() {
        assert!((concurrence(&thermal_mixture(0.6)) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn chsh_threshold_of_thermal_mixture() {
        let threshold = FRAC_1_SQRT_2;
        assert_eq!(i2(&thermal_mixture(threshold - 1e-9)), 0.0);
        assert!(i2(&thermal_mixture(threshold + 1e-9)) > 0.0);
        assert!((chsh_max(&thermal_mixture(threshold)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn extraction_rejects_non_x_states() {
        let mut m = Op4::identity() * Complex64::new(0.25, 0.0);
        m[(0, 1)] = Complex64::new(1e-3, 0.0);
        m[(1, 0)] = Complex64::new(1e-3, 0.0);
        let rho = DensityMatrix4::new(m, Basis::Local);
        assert!(matches!(
            XState::from_density(&rho),
            Err(Error::StructureViolation { .. })
        ));
        let rho = DensityMatrix4::new(Op4::identity() * Complex64::new(0.25, 0.0), Basis::Energy);
        assert!(XState::from_density(&rho).is_err());
    }

    #[test]
    fn round_trip_through_density() {
        let x = XState {
            p11: 0.4,
            p22: 0.2,
            p33: 0.3,
            p44: 0.1,
            r14: Complex64::new(0.05, -0.1),
            r23: Complex64::new(-0.12, 0.07),
        };
        assert_eq!(XState::from_density(&x.to_density()).unwrap(), x);
    }

    #[test]
    fn general_horodecki_agrees_with_x_state_form() {
        for (p2, r14) in [(0.9, 0.0), (0.75, 0.02), (0.3, 0.1)] {
            let mut x = thermal_mixture(p2);
            x.p44 = 0.05;
            x.p11 -= 0.05;
            x.r14 = Complex64::new(r14, 0.0);
            let rho = x.to_density();
            let general = chsh_optimal(&rho).unwrap();
            assert!((general.raw - chsh_max(&x)).abs() < 1e-12);
            let o = &general.optimal_observables;
            let explicit = chsh_expectation(&rho, [&o[0], &o[1]], [&o[2], &o[3]]);
            assert!((explicit - general.raw).abs() < 1e-12, "{explicit} {}", general.raw);
        }
    }
}
