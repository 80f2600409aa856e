use std::f64::consts::SQRT_2;

use nalgebra::{DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::hamiltonian::SpinParams;
use super::operator::Operator;
use crate::error::{Error, Result};

/// Below this value of k² − Bk the closed-form ground/top states divide by ~0.
pub const DEGENERACY_GUARD: f64 = 1e-14;

/// Amplitudes of the `{|00⟩, |11⟩}` sector eigenstates:
/// ψ₀ = (a|11⟩ + b|00⟩)/√2 and ψ₃ = (c|11⟩ + d|00⟩)/√2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl OverlapCoefficients {
    /// Exact values at γJ = 0, B > 0, where ψ₀ → |00⟩ and ψ₃ → |11⟩.
    pub fn commuting_limit() -> Self {
        OverlapCoefficients {
            a: 0.0,
            b: SQRT_2,
            c: SQRT_2,
            d: 0.0,
        }
    }
}

/// Eigen-decomposition of the two-spin Hamiltonian.
///
/// Levels are labelled by symmetry sector: index 0 and 3 live in `{|00⟩, |11⟩}` with
/// energies ∓2k, index 1 and 2 live in `{|01⟩, |10⟩}` with energies ∓2J. The labels are
/// in ascending energy order whenever k ≥ J.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub energies: [f64; 4],
    pub states: [DVector<C64>; 4],
    pub k: f64,
    pub coefficients: OverlapCoefficients,
}

impl Spectrum {
    pub fn state(&self, i: usize) -> &DVector<C64> {
        &self.states[i]
    }

    pub fn projector(&self, i: usize) -> Operator {
        Operator::outer(&self.states[i], &self.states[i])
    }

    /// Σ Eᵢ |ψᵢ⟩⟨ψᵢ|
    pub fn reconstruct(&self) -> Operator {
        let mut h = Operator::zeros(4);
        for i in 0..4 {
            h = &h + &self.projector(i).scale(C64::new(self.energies[i], 0.0));
        }
        h
    }
}

fn real_ket(amp00: f64, amp01: f64, amp10: f64, amp11: f64) -> DVector<C64> {
    DVector::from_vec(vec![
        C64::new(amp00, 0.0),
        C64::new(amp01, 0.0),
        C64::new(amp10, 0.0),
        C64::new(amp11, 0.0),
    ])
}

/// Rotates `v` so its first non-negligible amplitude is real and positive.
pub fn fix_phase(v: &mut DVector<C64>) {
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let phase = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

fn singlet_sector() -> (DVector<C64>, DVector<C64>) {
    let h = 1.0 / SQRT_2;
    (real_ket(0.0, h, -h, 0.0), real_ket(0.0, h, h, 0.0))
}

/// Closed-form eigenpairs.
///
/// Returns [`Error::DegenerateSpectrum`] when k² − Bk falls below [`DEGENERACY_GUARD`]
/// (γJ → 0), where the amplitude formulas become 0/0; see [`spectrum`] for the fallback.
pub fn analytic_spectrum(p: &SpinParams) -> Result<Spectrum> {
    p.validate()?;
    let k = p.k();
    let gj = p.gamma_j();
    let b = p.b;
    // k − B written without cancellation
    let k_minus_b = if k + b > 0.0 { gj * gj / (k + b) } else { 0.0 };
    let lower = k * k_minus_b;
    let upper = k * (k + b);
    if lower.abs() < DEGENERACY_GUARD || upper.abs() < DEGENERACY_GUARD {
        return Err(Error::DegenerateSpectrum(format!(
            "k² − Bk = {lower:e} at B = {b}, γJ = {gj}"
        )));
    }
    let coefficients = OverlapCoefficients {
        a: -k_minus_b / lower.sqrt(),
        b: gj / lower.sqrt(),
        c: (b + k) / upper.sqrt(),
        d: gj / upper.sqrt(),
    };
    Ok(assemble(p, k, coefficients))
}

fn assemble(p: &SpinParams, k: f64, co: OverlapCoefficients) -> Spectrum {
    let mut psi0 = real_ket(co.b / SQRT_2, 0.0, 0.0, co.a / SQRT_2);
    let mut psi3 = real_ket(co.d / SQRT_2, 0.0, 0.0, co.c / SQRT_2);
    fix_phase(&mut psi0);
    fix_phase(&mut psi3);
    let (psi1, psi2) = singlet_sector();
    Spectrum {
        energies: [-2.0 * k, -2.0 * p.j, 2.0 * p.j, 2.0 * k],
        states: [psi0, psi1, psi2, psi3],
        k,
        coefficients: co,
    }
}

/// Sector-resolved numeric eigendecomposition.
///
/// The `{|00⟩, |11⟩}` block `[[−2B, 2γJ], [2γJ, 2B]]` is diagonalised numerically; the
/// `{|01⟩, |10⟩}` block has fixed eigenvectors. Working per sector keeps the labels
/// meaningful when −2k and −2J coincide.
pub fn numeric_spectrum(p: &SpinParams) -> Result<Spectrum> {
    p.validate()?;
    let block = Matrix2::new(-2.0 * p.b, 2.0 * p.gamma_j(), 2.0 * p.gamma_j(), 2.0 * p.b);
    let eig = SymmetricEigen::new(block);
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let col = |i: usize| {
        let v = eig.eigenvectors.column(i);
        let mut ket = real_ket(v[0], 0.0, 0.0, v[1]);
        fix_phase(&mut ket);
        ket
    };
    let psi0 = col(lo);
    let psi3 = col(hi);
    let coefficients = OverlapCoefficients {
        a: SQRT_2 * psi0[3].re,
        b: SQRT_2 * psi0[0].re,
        c: SQRT_2 * psi3[3].re,
        d: SQRT_2 * psi3[0].re,
    };
    let (psi1, psi2) = singlet_sector();
    Ok(Spectrum {
        energies: [eig.eigenvalues[lo], -2.0 * p.j, 2.0 * p.j, eig.eigenvalues[hi]],
        states: [psi0, psi1, psi2, psi3],
        k: p.k(),
        coefficients,
    })
}

/// Closed form where it is well defined, numeric sector diagonalisation otherwise.
pub fn spectrum(p: &SpinParams) -> Result<Spectrum> {
    match analytic_spectrum(p) {
        Err(Error::DegenerateSpectrum(_)) => numeric_spectrum(p),
        other => other,
    }
}
