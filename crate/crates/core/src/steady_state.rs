// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Stationary state of a [`Liouvillian`] from its null space, plus a
//! matrix-exponential propagator used to cross-check it.

use libm::{ceil, log2};

use crate::eigensystem::EigenSystem;
use crate::error::{Error, Result};
use crate::linalg::{
    c, hermitian_eigenvalues, hermitize, superop_max_abs, trace, unvectorize, vectorize, Op4,
    Superop,
};
use crate::liouvillian::Liouvillian;

/// Singular values below `KERNEL_TOLERANCE * sigma_max` count as zero.
pub const KERNEL_TOLERANCE: f64 = 1e-10;
/// Negative eigenvalues above `-CLIP_TOLERANCE` are treated as round-off and clipped.
pub const CLIP_TOLERANCE: f64 = 1e-9;
/// Negative eigenvalues below `-NEGATIVITY_LIMIT` make the state unphysical.
pub const NEGATIVITY_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Local,
    Energy,
}

/// A 4x4 density matrix tagged with the basis it is written in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4 {
    pub matrix: Op4,
    pub basis: Basis,
}

impl DensityMatrix4 {
    pub fn new(matrix: Op4, basis: Basis) -> Self {
        Self { matrix, basis }
    }

    pub fn maximally_mixed(basis: Basis) -> Self {
        Self::new(Op4::identity() * c(0.25), basis)
    }

    pub fn in_basis(&self, basis: Basis, es: &EigenSystem) -> Self {
        let matrix = match (self.basis, basis) {
            (Basis::Energy, Basis::Local) => es.to_local(&self.matrix),
            (Basis::Local, Basis::Energy) => es.to_energy(&self.matrix),
            _ => self.matrix,
        };
        Self::new(matrix, basis)
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub rho_energy: DensityMatrix4,
    pub rho_local: DensityMatrix4,
    /// `‖L vec(rho)‖₂` of the returned state.
    pub residual: f64,
    pub kernel_dim: usize,
    /// Smallest eigenvalue of the raw null vector before any clipping.
    pub min_eigenvalue: f64,
    pub clipped: bool,
}

/// Solves `L rho = 0`, `Tr rho = 1` by singular value decomposition.
pub fn solve_steady_state(l: &Liouvillian, es: &EigenSystem) -> Result<SteadyState> {
    let svd = l.matrix.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::StepFailure("SVD did not converge"))?;
    let sv = &svd.singular_values;

    let mut order: [usize; 16] = core::array::from_fn(|i| i);
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let sigma_max = sv[order[15]];
    let kernel_dim = order
        .iter()
        .filter(|&&i| sv[i] < KERNEL_TOLERANCE * sigma_max)
        .count();
    let second = sv[order[1]];
    if second < KERNEL_TOLERANCE * sigma_max {
        return Err(Error::DegenerateSteadyState {
            ratio: second / sigma_max,
        });
    }

    // rows of V^dagger are conjugated right singular vectors
    let null = v_t.row(order[0]).adjoint();
    let raw = unvectorize(&null);
    let tr = trace(&raw);
    let mut rho = hermitize(&(raw / tr));

    let eig = rho.symmetric_eigen();
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -NEGATIVITY_LIMIT {
        return Err(Error::NonPhysical { min_eigenvalue });
    }
    let mut clipped = false;
    if (-CLIP_TOLERANCE..0.0).contains(&min_eigenvalue) {
        let mut values = eig.eigenvalues;
        values.iter_mut().for_each(|x| *x = x.max(0.0));
        let total: f64 = values.iter().sum();
        let d = Op4::from_diagonal(&values.map(|x| c(x / total)));
        rho = hermitize(&(eig.eigenvectors * d * eig.eigenvectors.adjoint()));
        clipped = true;
    }

    let residual = (l.matrix * vectorize(&rho)).norm();
    let rho_energy = DensityMatrix4::new(rho, Basis::Energy);
    Ok(SteadyState {
        rho_local: rho_energy.in_basis(Basis::Local, es),
        rho_energy,
        residual,
        kernel_dim,
        min_eigenvalue,
        clipped,
    })
}

fn norm1(m: &Superop) -> f64 {
    (0..16)
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a Taylor series on the scaled matrix.
pub fn expm(a: &Superop) -> Result<Superop> {
    let norm = norm1(a);
    if !norm.is_finite() {
        return Err(Error::StepFailure("generator has non-finite entries"));
    }
    let squarings = if norm > 0.25 {
        ceil(log2(norm / 0.25)) as i32
    } else {
        0
    };
    if squarings > 200 {
        return Err(Error::StepFailure("time step too large"));
    }
    let scaled = a * c(1.0 / libm::pow(2.0, squarings as f64));

    let mut result = Superop::identity();
    let mut term = Superop::identity();
    let mut converged = false;
    for k in 1..=30 {
        term = term * scaled * c(1.0 / k as f64);
        result += term;
        if superop_max_abs(&term) < 1e-18 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::StepFailure("Taylor series did not converge"));
    }
    for _ in 0..squarings {
        result = result * result;
    }
    if result.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::StepFailure("propagator overflowed"));
    }
    Ok(result)
}

/// `rho(t) = exp(L t) rho(0)`; `rho0` must be in the energy basis.
pub fn propagate(l: &Liouvillian, rho0: &DensityMatrix4, t: f64) -> Result<DensityMatrix4> {
    if rho0.basis != Basis::Energy {
        return Err(Error::InvalidParameter {
            name: "rho0",
            reason: "initial state must be given in the energy basis",
        });
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "must be finite and >= 0",
        });
    }
    if t == 0.0 {
        return Ok(*rho0);
    }
    let prop = expm(&(l.matrix * c(t)))?;
    let out = unvectorize(&(prop * vectorize(&rho0.matrix)));
    Ok(DensityMatrix4::new(out, Basis::Energy))
}
