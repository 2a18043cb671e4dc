// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-size complex matrices shared by every module.
//!
//! Superoperators act on density matrices vectorized by stacking columns:
//! entry `(row, col)` of a 4x4 matrix lands at index `4 * col + row`, and
//! `vec(A X B) = (B^T ⊗ A) vec(X)`.

use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

pub type Op2 = Matrix2<Complex64>;
pub type Op4 = Matrix4<Complex64>;
pub type Superop = SMatrix<Complex64, 16, 16>;
pub type Vec16 = SVector<Complex64, 16>;
pub type Real3 = Matrix3<f64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrices in the qubit basis `{|0>, |1>}` with `sigma_z |0> = -|0>`
/// and `sigma_+ = |1><0|`.
pub fn pauli() -> [Op2; 3] {
    [
        Op2::new(ZERO, ONE, ONE, ZERO),
        Op2::new(ZERO, I, -I, ZERO),
        Op2::new(-ONE, ZERO, ZERO, ONE),
    ]
}

pub fn kron2(a: &Op2, b: &Op2) -> Op4 {
    Op4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Matrix whose only nonzero entry is a one at `(row, col)`, i.e. `|row><col|`.
pub fn ket_bra(row: usize, col: usize) -> Op4 {
    let mut m = Op4::zeros();
    m[(row, col)] = ONE;
    m
}

pub fn vectorize(m: &Op4) -> Vec16 {
    Vec16::from_fn(|k, _| m[(k % 4, k / 4)])
}

pub fn unvectorize(v: &Vec16) -> Op4 {
    Op4::from_fn(|r, c| v[4 * c + r])
}

/// `vec(A X B)` as a superoperator: `B^T ⊗ A`.
pub fn sandwich(a: &Op4, b: &Op4) -> Superop {
    Superop::from_fn(|i, j| b[(j / 4, i / 4)] * a[(i % 4, j % 4)])
}

/// `vec(A X)`.
pub fn left(a: &Op4) -> Superop {
    sandwich(a, &Op4::identity())
}

/// `vec(X B)`.
pub fn right(b: &Op4) -> Superop {
    sandwich(&Op4::identity(), b)
}

pub fn hermitize(m: &Op4) -> Op4 {
    (m + m.adjoint()) * c(0.5)
}

pub fn trace(m: &Op4) -> Complex64 {
    m.trace()
}

/// Ascending eigenvalues of a Hermitian matrix (the anti-Hermitian part is dropped).
pub fn hermitian_eigenvalues(m: &Op4) -> [f64; 4] {
    let eig = hermitize(m).symmetric_eigen();
    let mut v = [
        eig.eigenvalues[0],
        eig.eigenvalues[1],
        eig.eigenvalues[2],
        eig.eigenvalues[3],
    ];
    v.sort_by(f64::total_cmp);
    v
}

/// `½ ‖a − b‖₁` for Hermitian arguments.
pub fn trace_distance(a: &Op4, b: &Op4) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b))
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Largest absolute entry.
pub fn max_abs(m: &Op4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn superop_max_abs(m: &Superop) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
