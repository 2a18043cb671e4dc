// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

use libm::{atan2, cos, sin, sqrt};
use nalgebra::Vector3;

use crate::linalg::{c, pauli, Op2};

/// A dichotomic (eigenvalues ±1) single-qubit observable `n · sigma`, or the
/// trivial observable `±1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    /// Unit Bloch vector, or zero for a trivial observable.
    pub direction: Vector3<f64>,
    /// `±1` for a trivial observable, zero otherwise.
    pub constant: f64,
}

impl Observable {
    /// `v / |v| · sigma`; a zero vector maps to `sigma_z`.
    pub fn from_vector(v: &Vector3<f64>) -> Self {
        let n = v.norm();
        let direction = if n > 0.0 { v / n } else { Vector3::z() };
        Self {
            direction,
            constant: 0.0,
        }
    }

    /// Polar angle `theta` from the z axis and azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            direction: Vector3::new(sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta)),
            constant: 0.0,
        }
    }

    pub fn trivial(sign: f64) -> Self {
        Self {
            direction: Vector3::zeros(),
            constant: if sign < 0.0 { -1.0 } else { 1.0 },
        }
    }

    /// `(theta, phi)` of the direction.
    pub fn angles(&self) -> (f64, f64) {
        let d = &self.direction;
        (atan2(sqrt(d.x * d.x + d.y * d.y), d.z), atan2(d.y, d.x))
    }

    pub fn operator(&self) -> Op2 {
        let s = pauli();
        Op2::identity() * c(self.constant)
            + s[0] * c(self.direction.x)
            + s[1] * c(self.direction.y)
            + s[2] * c(self.direction.z)
    }
}
