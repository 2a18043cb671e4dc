// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Maximal expectation of the three-setting Bell operator
//! `A1(B1+B2+B3) + A2(B1+B2-B3) + A3(B1-B2) + (A1+A2)1 - 1(B1+B2)`.
//!
//! For fixed observables on one side the operator is linear in each
//! observable of the other side, so either half can be optimized exactly.
//! The search alternates the two exact half-steps from random starts and
//! polishes Alice's angles with Nelder-Mead, Bob always following analytically.

use alloc::vec;
use alloc::vec::Vec;

use libm::{acos, cos, sin};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BellResult, CorrelationData, Observable, OptimizerDiagnostics};
use crate::error::Result;
use crate::linalg::{kron2, Op2, Op4};
use crate::optim::NelderMead;
use crate::steady_state::DensityMatrix4;

/// Classical bound of the operator.
pub const LOCAL_BOUND: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct I3322Config {
    pub seed: u64,
    pub restarts: usize,
    /// Cap on alternating half-steps per restart.
    pub max_iter: usize,
    /// Alternation stops once a round improves the objective by less than this.
    pub tol: f64,
    /// Restarts are reported as unconverged above this top-decile spread.
    pub spread_threshold: f64,
}

impl Default for I3322Config {
    fn default() -> Self {
        Self {
            seed: 3322,
            restarts: 200,
            max_iter: 500,
            tol: 1e-9,
            spread_threshold: 1e-3,
        }
    }
}

pub fn bell_operator_3322_ops(a: [&Op2; 3], b: [&Op2; 3]) -> Op4 {
    let id = Op2::identity();
    kron2(a[0], &(b[0] + b[1] + b[2]))
        + kron2(a[1], &(b[0] + b[1] - b[2]))
        + kron2(a[2], &(b[0] - b[1]))
        + kron2(&(a[0] + a[1]), &id)
        - kron2(&id, &(b[0] + b[1]))
}

pub fn bell_operator_3322(a: &[Observable; 3], b: &[Observable; 3]) -> Op4 {
    let a = a.map(|o| o.operator());
    let b = b.map(|o| o.operator());
    bell_operator_3322_ops([&a[0], &a[1], &a[2]], [&b[0], &b[1], &b[2]])
}

type Triple = [Vector3<f64>; 3];

fn unit_or_z(v: Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n > 0.0 {
        v / n
    } else {
        Vector3::z()
    }
}

/// Bob's effective fields for fixed Alice directions.
fn bob_fields(cd: &CorrelationData, a: &Triple) -> Triple {
    let tt = cd.t.transpose();
    [
        tt * (a[0] + a[1] + a[2]) - cd.bob,
        tt * (a[0] + a[1] - a[2]) - cd.bob,
        tt * (a[0] - a[1]),
    ]
}

/// Alice's effective fields for fixed Bob directions.
fn alice_fields(cd: &CorrelationData, b: &Triple) -> Triple {
    [
        cd.t * (b[0] + b[1] + b[2]) + cd.alice,
        cd.t * (b[0] + b[1] - b[2]) + cd.alice,
        cd.t * (b[0] - b[1]),
    ]
}

/// Objective maximized over Bob: `sum_k |c_k| + r·(a1 + a2)`.
fn value_for_alice(cd: &CorrelationData, a: &Triple) -> f64 {
    let f = bob_fields(cd, a);
    f.iter().map(|v| v.norm()).sum::<f64>() + cd.alice.dot(&(a[0] + a[1]))
}

fn best_bob(cd: &CorrelationData, a: &Triple) -> Triple {
    bob_fields(cd, a).map(unit_or_z)
}

fn best_alice(cd: &CorrelationData, b: &Triple) -> Triple {
    alice_fields(cd, b).map(unit_or_z)
}

fn direction(theta: f64, phi: f64) -> Vector3<f64> {
    Vector3::new(sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta))
}

fn to_angles(a: &Triple) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (k, v) in a.iter().enumerate() {
        let (t, p) = Observable::from_vector(v).angles();
        out[2 * k] = t;
        out[2 * k + 1] = p;
    }
    out
}

fn from_angles(x: &[f64]) -> Triple {
    [
        direction(x[0], x[1]),
        direction(x[2], x[3]),
        direction(x[4], x[5]),
    ]
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..core::f64::consts::TAU);
    direction(acos(z), phi)
}

/// Alternates the exact half-steps until the improvement drops below `tol`.
fn see_saw(cd: &CorrelationData, mut a: Triple, cfg: &I3322Config) -> (Triple, f64) {
    let mut value = value_for_alice(cd, &a);
    for _ in 0..cfg.max_iter {
        let next = best_alice(cd, &best_bob(cd, &a));
        let v = value_for_alice(cd, &next);
        if v < value + cfg.tol {
            if v > value {
                a = next;
                value = v;
            }
            break;
        }
        a = next;
        value = v;
    }
    (a, value)
}

fn local_search(cd: &CorrelationData, start: Triple, cfg: &I3322Config) -> (Triple, f64) {
    let (a, v) = see_saw(cd, start, cfg);
    let nm = NelderMead {
        step: 0.05,
        ftol: 1e-13,
        max_evals: 3000,
    };
    let polished = nm.minimize(|x| -value_for_alice(cd, &from_angles(x)), &to_angles(&a));
    let (a, v) = if -polished.value > v {
        see_saw(cd, from_angles(&polished.x), cfg)
    } else {
        (a, v)
    };
    (a, v)
}

/// Maximizes the operator over dichotomic observables with correlation data
/// already extracted.
pub fn i3322_max_from_correlations(cd: &CorrelationData, cfg: &I3322Config) -> BellResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let restarts = cfg.restarts.max(1);
    let mut values: Vec<f64> = Vec::with_capacity(restarts);
    let mut best: Option<(Triple, f64)> = None;
    for _ in 0..restarts {
        let start = [
            random_unit(&mut rng),
            random_unit(&mut rng),
            random_unit(&mut rng),
        ];
        let (a, v) = local_search(cd, start, cfg);
        values.push(v);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((a, v));
        }
    }
    let (a, raw) = best.unwrap_or(([Vector3::z(); 3], f64::NEG_INFINITY));
    let b = best_bob(cd, &a);

    values.sort_by(|x, y| y.total_cmp(x));
    let decile = restarts.div_ceil(10);
    let spread = values[0] - values[decile - 1];

    let observables = a
        .iter()
        .chain(b.iter())
        .map(Observable::from_vector)
        .collect::<Vec<_>>();
    BellResult {
        value: (raw - LOCAL_BOUND).max(0.0),
        raw,
        optimal_observables: observables,
        diagnostics: OptimizerDiagnostics {
            restarts,
            best_objective: raw,
            spread,
            converged: spread <= cfg.spread_threshold,
        },
    }
}

/// `I_3 = max{0, max Tr(B rho) - 4}` for a local-basis density matrix.
pub fn i3322_max(rho: &DensityMatrix4, cfg: &I3322Config) -> Result<BellResult> {
    let cd = CorrelationData::from_density(rho)?;
    if cd.t.iter().all(|x| x.abs() < 1e-300) && cd.alice.norm() == 0.0 && cd.bob.norm() == 0.0 {
        // every Bob field vanishes; any choice is optimal
        let z = Observable::from_vector(&Vector3::z());
        return Ok(BellResult {
            value: 0.0,
            raw: 0.0,
            optimal_observables: vec![z; 6],
            diagnostics: OptimizerDiagnostics {
                restarts: 0,
                best_objective: 0.0,
                spread: 0.0,
                converged: true,
            },
        });
    }
    Ok(i3322_max_from_correlations(&cd, cfg))
}
