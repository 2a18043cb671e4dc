// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bloch-Redfield generator `L = -i[H_S, .] + D_1 + D_2` as a 16x16 matrix in
//! the energy basis (column-stacked vectorization, see [`crate::linalg`]).
//!
//! Each dissipator keeps the cross terms between the `eps_minus` and `eps_plus`
//! transitions. [`DissipatorForm::Secular`] drops them and gives the Lindblad
//! (secular) generator for comparison.

use crate::bath::{BathSpec, Rates, Statistics};
use crate::eigensystem::{build_eigensystem, CouplingRegime, EigenSystem, SystemParams};
use crate::error::{Error, Result};
use crate::linalg::{c, left, right, sandwich, unvectorize, vectorize, Op4, Superop, I};

/// Which reservoir a dissipator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    One,
    Two,
}

impl Bath {
    pub const BOTH: [Bath; 2] = [Bath::One, Bath::Two];

    pub fn index(self) -> usize {
        match self {
            Bath::One => 0,
            Bath::Two => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DissipatorForm {
    /// Full Bloch-Redfield dissipator with population/coherence cross terms.
    #[default]
    BlochRedfield,
    /// Cross terms removed.
    Secular,
}

/// A superoperator on 4x4 matrices in the energy basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub matrix: Superop,
}

impl Liouvillian {
    pub fn apply(&self, rho: &Op4) -> Op4 {
        unvectorize(&(self.matrix * vectorize(rho)))
    }
}

impl core::ops::Add for &Liouvillian {
    type Output = Liouvillian;

    fn add(self, rhs: &Liouvillian) -> Liouvillian {
        Liouvillian {
            matrix: self.matrix + rhs.matrix,
        }
    }
}

/// `-i [H, rho]` for `H` given in the energy basis.
pub fn hamiltonian_part(h: &Op4) -> Liouvillian {
    Liouvillian {
        matrix: (left(h) - right(h)) * (-I),
    }
}

/// Accumulates `rate * (sum_k A_k rho B_k - sum_k C_k rho + h.c.)`.
struct Accumulator {
    matrix: Superop,
}

impl Accumulator {
    fn group(&mut self, rate: f64, sandwiches: &[(&Op4, &Op4)], lefts: &[Op4]) {
        if rate == 0.0 {
            return;
        }
        let mut g = Superop::zeros();
        for (a, b) in sandwiches {
            // A rho B + (A rho B)^dagger = A rho B + B^dag rho A^dag
            g += sandwich(a, b) + sandwich(&b.adjoint(), &a.adjoint());
        }
        for m in lefts {
            g -= left(m) + right(&m.adjoint());
        }
        self.matrix += g * c(rate);
    }
}

/// `D_j` for the reservoir `bath` coupled to qubit `j`.
pub fn build_dissipator(b: &BathSpec, es: &EigenSystem, j: Bath) -> Result<Liouvillian> {
    build_dissipator_with(b, es, j, DissipatorForm::BlochRedfield)
}

pub fn build_dissipator_with(
    b: &BathSpec,
    es: &EigenSystem,
    j: Bath,
    form: DissipatorForm,
) -> Result<Liouvillian> {
    b.validate()?;
    let rates = Rates::new(b, es)?;
    let eta = &es.eta[j.index()];
    let xi = &es.xi[j.index()];
    let (eta_d, xi_d) = (eta.adjoint(), xi.adjoint());
    let cross = form == DissipatorForm::BlochRedfield;

    let mut acc = Accumulator {
        matrix: Superop::zeros(),
    };
    // Each group lists its diagonal (same-operator) terms first and the cross
    // terms second; the secular form keeps only the former.
    let pick = |all: usize| if cross { all } else { 1 };

    let s = [(&eta_d, eta), (&eta_d, xi)];
    let l = [eta * eta_d, xi * eta_d];
    acc.group(rates.alpha_minus, &s[..pick(2)], &l[..pick(2)]);

    let s = [(&xi_d, xi), (&eta_d, xi)];
    let l = [xi * xi_d, eta * xi_d];
    acc.group(rates.alpha_plus, &s[..pick(2)], &l[..pick(2)]);

    let s = [(eta, &eta_d), (eta, &xi_d)];
    let l = [eta_d * eta, xi_d * eta];
    acc.group(rates.beta_minus, &s[..pick(2)], &l[..pick(2)]);

    let s = [(xi, &xi_d), (eta, &xi_d)];
    let l = [xi_d * xi, eta_d * xi];
    acc.group(rates.beta_plus, &s[..pick(2)], &l[..pick(2)]);

    Ok(Liouvillian { matrix: acc.matrix })
}

/// The two-qubit system with its reservoirs: eigensystem, the individual
/// dissipators (needed for the currents) and the full generator.
#[derive(Debug, Clone)]
pub struct OpenSystem {
    pub eigensystem: EigenSystem,
    pub baths: [BathSpec; 2],
    pub form: DissipatorForm,
    pub dissipators: [Liouvillian; 2],
    pub liouvillian: Liouvillian,
}

impl OpenSystem {
    pub fn new(p: &SystemParams, b1: &BathSpec, b2: &BathSpec) -> Result<Self> {
        Self::with_form(p, b1, b2, DissipatorForm::BlochRedfield)
    }

    pub fn with_form(
        p: &SystemParams,
        b1: &BathSpec,
        b2: &BathSpec,
        form: DissipatorForm,
    ) -> Result<Self> {
        if b1.statistics != b2.statistics {
            return Err(Error::MixedStatistics);
        }
        let es = build_eigensystem(p)?;
        // Particle-number bookkeeping of the transition operators only holds
        // with the weak-coupling level ordering.
        if b1.statistics == Statistics::Fermion && es.regime == CouplingRegime::Strong {
            return Err(Error::UnsupportedRegime);
        }
        let weakest = if p.eps1 < p.eps2 { p.eps1 } else { p.eps2 };
        for b in [b1, b2] {
            if b.gamma > 0.3 * weakest {
                log::warn!(
                    "gamma = {} is not small compared with the qubit frequencies; \
                     the weak system-bath coupling assumption may not hold",
                    b.gamma
                );
            }
        }
        let d1 = build_dissipator_with(b1, &es, Bath::One, form)?;
        let d2 = build_dissipator_with(b2, &es, Bath::Two, form)?;
        let mut total = hamiltonian_part(&es.hamiltonian());
        total.matrix += d1.matrix + d2.matrix;
        Ok(Self {
            eigensystem: es,
            baths: [*b1, *b2],
            form,
            dissipators: [d1, d2],
            liouvillian: total,
        })
    }

    pub fn dissipator(&self, j: Bath) -> &Liouvillian {
        &self.dissipators[j.index()]
    }
}

/// Full generator `L` for the given system and reservoirs.
pub fn build_liouvillian(p: &SystemParams, b1: &BathSpec, b2: &BathSpec) -> Result<Liouvillian> {
    Ok(OpenSystem::new(p, b1, b2)?.liouvillian)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitize, max_abs, trace, ZERO};
    use num_complex::Complex64;

    fn random_hermitian(seed: u64) -> Op4 {
        // small LCG so the test does not depend on an RNG crate
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = Op4::from_fn(|_, _| Complex64::new(next(), next()));
        hermitize(&m)
    }

    fn system(eps1: f64, eps2: f64, kappa: f64, t1: f64, t2: f64) -> OpenSystem {
        let p = SystemParams::new(eps1, eps2, kappa).unwrap();
        OpenSystem::new(
            &p,
            &BathSpec::boson(t1, 0.1).unwrap(),
            &BathSpec::boson(t2, 0.07).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn dissipators_are_trace_free_and_hermiticity_preserving() {
        for (k, sys) in [
            system(1.0, 1.0, 0.5, 0.3, 0.9),
            system(0.5, 1.5, 3.0, 0.4, 0.2),
        ]
        .iter()
        .enumerate()
        {
            for seed in 0..100 {
                let rho = random_hermitian(seed + 1000 * k as u64);
                for d in &sys.dissipators {
                    let out = d.apply(&rho);
                    assert!(trace(&out).norm() < 1e-10);
                    assert!(max_abs(&(out - out.adjoint())) < 1e-10);
                }
                let out = sys.liouvillian.apply(&rho);
                assert!(trace(&out).norm() < 1e-10);
                assert!(max_abs(&(out - out.adjoint())) < 1e-10);
            }
        }
    }

    #[test]
    fn symmetric_transition_weights() {
        let sys = system(1.0, 1.0, 0.5, 0.3, 0.9);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let es = &sys.eigensystem;
        assert!((es.eta[0][(2, 3)].re - r).abs() < 1e-15);
        assert!((es.eta[0][(0, 1)].re + r).abs() < 1e-15);
        assert!((es.xi[0][(1, 3)].re - r).abs() < 1e-15);
        assert!((es.xi[0][(0, 2)].re - r).abs() < 1e-15);
    }

    #[test]
    fn mixed_statistics_rejected() {
        let p = SystemParams::new(1.0, 1.0, 0.5).unwrap();
        let r = OpenSystem::new(
            &p,
            &BathSpec::boson(1.0, 0.1).unwrap(),
            &BathSpec::fermion(1.0, 0.0, 0.1).unwrap(),
        );
        assert!(matches!(r, Err(Error::MixedStatistics)));
    }

    #[test]
    fn fermions_require_weak_coupling() {
        let p = SystemParams::new(1.0, 1.0, 3.0).unwrap();
        let b = BathSpec::fermion(0.2, 1.0, 0.1).unwrap();
        assert!(matches!(
            OpenSystem::new(&p, &b, &b),
            Err(Error::UnsupportedRegime)
        ));
    }

    #[test]
    fn closed_system_is_pure_commutator() {
        let p = SystemParams::new(0.7, 1.3, 0.4).unwrap();
        let b = BathSpec::boson(0.5, 0.0).unwrap();
        let sys = OpenSystem::new(&p, &b, &b).unwrap();
        let e = sys.eigensystem.energies;
        // diagonal in the energy basis: |a><b| -> -i (E_a - E_b) |a><b|
        for a in 0..4 {
            for bb in 0..4 {
                let k = 4 * bb + a;
                for l in 0..16 {
                    let expected = if l == k {
                        Complex64::new(0.0, -(e[a] - e[bb]))
                    } else {
                        ZERO
                    };
                    assert!((sys.liouvillian.matrix[(k, l)] - expected).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn secular_form_drops_only_cross_terms() {
        let p = SystemParams::new(0.8, 1.2, 0.6).unwrap();
        let b = BathSpec::boson(0.5, 0.1).unwrap();
        let full = build_dissipator(&b, &build_eigensystem(&p).unwrap(), Bath::One).unwrap();
        let sec = build_dissipator_with(
            &b,
            &build_eigensystem(&p).unwrap(),
            Bath::One,
            DissipatorForm::Secular,
        )
        .unwrap();
        // populations -> populations are identical, populations -> coherences differ
        for a in 0..4 {
            for bb in 0..4 {
                let (ka, kb) = (5 * a, 5 * bb);
                assert!((full.matrix[(ka, kb)] - sec.matrix[(ka, kb)]).norm() < 1e-15);
            }
        }
        // |2><3| coherence (energy basis index 4*2+1) is fed by populations only with cross terms
        let coh = 4 * 2 + 1;
        let fed: f64 = (0..4).map(|a| full.matrix[(coh, 5 * a)].norm()).sum();
        let fed_sec: f64 = (0..4).map(|a| sec.matrix[(coh, 5 * a)].norm()).sum();
        assert!(fed > 1e-3);
        assert_eq!(fed_sec, 0.0);
    }

    #[test]
    fn uncoupled_limit_is_local_damping() {
        // kappa -> 0 with detuned qubits: |2> -> |01>, |3> -> |10| up to sign,
        // and bath 1 only flips qubit 1.
        let p = SystemParams::new(1.0, 1.5, 1e-7).unwrap();
        let b1 = BathSpec::boson(0.6, 0.1).unwrap();
        let b2 = BathSpec::boson(0.6, 0.0).unwrap();
        let sys = OpenSystem::new(&p, &b1, &b2).unwrap();
        let es = &sys.eigensystem;
        let d = sys.dissipator(Bath::One);
        // local amplitude damping of qubit 1 in the local basis:
        // gamma (1+n) (s- rho s+ - 1/2 {s+ s-, rho}) * 2 + gamma n (s+ rho s- - ...) * 2
        let [x, y, _] = crate::linalg::pauli();
        let minus1 = crate::linalg::kron2(
            &((x - y * I) * c(0.5)),
            &crate::linalg::Op2::identity(),
        );
        let plus1 = minus1.adjoint();
        let n = crate::bath::occupation(&b1, p.eps1).unwrap();
        let g = 0.1;
        let local = |rho: &Op4| -> Op4 {
            let em = (minus1 * rho * plus1) * c(2.0)
                - (plus1 * minus1 * rho + rho * plus1 * minus1);
            let ab = (plus1 * rho * minus1) * c(2.0)
                - (minus1 * plus1 * rho + rho * minus1 * plus1);
            em * c(g * (1.0 + n)) + ab * c(g * n)
        };
        for seed in 0..10 {
            let rho_local = random_hermitian(seed);
            let expected = local(&rho_local);
            let got = es.to_local(&d.apply(&es.to_energy(&rho_local)));
            assert!(max_abs(&(expected - got)) < 1e-6, "{}", max_abs(&(expected - got)));
        }
    }
}
