use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::propagator::{stroke_pair, Direction, Propagator};
use crate::error::{Error, Result};
use crate::qcore::{basis_ket, spectrum, SpinParams, Spectrum};

/// Tolerance for the forward/backward probability equalities.
pub const MICROREVERSIBILITY_TOL: f64 = 1e-8;
/// Ceiling for transitions the symmetry sectors forbid.
pub const SELECTION_TOL: f64 = 1e-10;

/// Nonadiabatic transition probabilities of one stroke pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionProbabilities {
    pub xi: f64,
    pub lambda: f64,
    pub delta: f64,
    pub tau: f64,
}

impl TransitionProbabilities {
    /// τ → ∞: no level transitions, local overlaps follow the instantaneous eigenstates.
    pub fn adiabatic(spec_low: &Spectrum, spec_high: &Spectrum) -> Self {
        TransitionProbabilities {
            xi: 0.0,
            lambda: adiabatic_lambda(spec_high),
            delta: adiabatic_delta(spec_low),
            tau: f64::INFINITY,
        }
    }
}

/// λ_{τ→∞} = a_H²/2
pub fn adiabatic_lambda(spec_high: &Spectrum) -> f64 {
    0.5 * spec_high.coefficients.a.powi(2)
}

/// δ_{τ→∞} = a_L²/2
pub fn adiabatic_delta(spec_low: &Spectrum) -> f64 {
    0.5 * spec_low.coefficients.a.powi(2)
}

fn prob(u: &Propagator, bra: &nalgebra::DVector<C64>, ket: &nalgebra::DVector<C64>) -> f64 {
    u.u.matrix_element(bra, ket).norm_sqr()
}

fn expect_expansion(u: &Propagator) -> Result<()> {
    if u.protocol.direction != Direction::Expansion {
        return Err(Error::InvalidProtocol("expected the expansion propagator U".into()));
    }
    Ok(())
}

fn expect_compression(v: &Propagator) -> Result<()> {
    if v.protocol.direction != Direction::Compression {
        return Err(Error::InvalidProtocol("expected the compression propagator V".into()));
    }
    Ok(())
}

fn agree(label: &str, values: &[f64], tol: f64) -> Result<()> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > tol {
        return Err(Error::MicroreversibilityViolation(format!(
            "{label}: spread {:e} over {values:?}",
            hi - lo
        )));
    }
    Ok(())
}

/// ξ = |⟨ψ₀⁽²⁾|U|ψ₃⁽¹⁾⟩|², the level-crossing probability of the expansion stroke.
///
/// Before returning, checks within the U block that ξ equals |⟨ψ₃⁽²⁾|U|ψ₀⁽¹⁾⟩|² and that
/// both ψ₀⁽¹⁾ and ψ₃⁽¹⁾ keep their whole weight inside the `{ψ₀⁽²⁾, ψ₃⁽²⁾}` sector. The
/// V-side equalities are checked by [`microreversibility`].
pub fn transition_xi(u: &Propagator, spec1: &Spectrum, spec2: &Spectrum) -> Result<f64> {
    expect_expansion(u)?;
    let (l, h) = (&spec1.states, &spec2.states);
    let xi = prob(u, &h[0], &l[3]);
    let back = prob(u, &h[3], &l[0]);
    let stay3 = prob(u, &h[3], &l[3]);
    let stay0 = prob(u, &h[0], &l[0]);
    agree("ξ forward/backward", &[xi, back, 1.0 - stay3, 1.0 - stay0], MICROREVERSIBILITY_TOL)?;
    Ok(xi)
}

/// All four crossing probabilities that microreversibility equates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MicroreversibilityReport {
    /// |⟨ψ₀⁽²⁾|U|ψ₃⁽¹⁾⟩|²
    pub u_03: f64,
    /// |⟨ψ₃⁽²⁾|U|ψ₀⁽¹⁾⟩|²
    pub u_30: f64,
    /// |⟨ψ₃⁽¹⁾|V|ψ₀⁽²⁾⟩|²
    pub v_30: f64,
    /// |⟨ψ₀⁽¹⁾|V|ψ₃⁽²⁾⟩|²
    pub v_03: f64,
}

impl MicroreversibilityReport {
    pub fn spread(&self) -> f64 {
        let v = [self.u_03, self.u_30, self.v_30, self.v_03];
        v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn microreversibility(
    u: &Propagator,
    v: &Propagator,
    spec1: &Spectrum,
    spec2: &Spectrum,
) -> Result<MicroreversibilityReport> {
    expect_expansion(u)?;
    expect_compression(v)?;
    let (l, h) = (&spec1.states, &spec2.states);
    Ok(MicroreversibilityReport {
        u_03: prob(u, &h[0], &l[3]),
        u_30: prob(u, &h[3], &l[0]),
        v_30: prob(v, &l[3], &h[0]),
        v_03: prob(v, &l[0], &h[3]),
    })
}

/// λ = |⟨00|U|ψ₃⁽¹⁾⟩|² and δ = |⟨11|V|ψ₀⁽²⁾⟩|².
///
/// Checks λ = |⟨11|U|ψ₀⁽¹⁾⟩|², δ = |⟨00|V|ψ₃⁽²⁾⟩|², the four crossing probabilities of
/// [`microreversibility`], and that no weight leaks from ψ₀, ψ₃ into `{|01⟩, |10⟩}`.
pub fn transition_lambda_delta(
    u: &Propagator,
    v: &Propagator,
    spec1: &Spectrum,
    spec2: &Spectrum,
) -> Result<(f64, f64)> {
    let report = microreversibility(u, v, spec1, spec2)?;
    agree(
        "ξ microreversibility",
        &[report.u_03, report.u_30, report.v_30, report.v_03],
        MICROREVERSIBILITY_TOL,
    )?;
    let (l, h) = (&spec1.states, &spec2.states);
    let (k00, k01, k10, k11) = (basis_ket(0, 0), basis_ket(0, 1), basis_ket(1, 0), basis_ket(1, 1));

    let lambda = prob(u, &k00, &l[3]);
    agree("λ", &[lambda, prob(u, &k11, &l[0])], MICROREVERSIBILITY_TOL)?;
    let delta = prob(v, &k11, &h[0]);
    agree("δ", &[delta, prob(v, &k00, &h[3])], MICROREVERSIBILITY_TOL)?;

    for (w, start, name) in [(u, &l[0], "U ψ₀⁽¹⁾"), (u, &l[3], "U ψ₃⁽¹⁾"), (v, &h[0], "V ψ₀⁽²⁾"), (v, &h[3], "V ψ₃⁽²⁾")] {
        let leak = prob(w, &k01, start).max(prob(w, &k10, start));
        if leak > SELECTION_TOL {
            return Err(Error::MicroreversibilityViolation(format!(
                "{name} leaks {leak:e} into the singlet/triplet sector"
            )));
        }
    }
    Ok((lambda, delta))
}

/// The two amplitudes whose interference gives λ (for U) or δ (for V).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interference {
    pub amp_a: C64,
    pub amp_b: C64,
    /// |amp_a − amp_b|²
    pub total: f64,
}

/// Splits ⟨00|U|ψ₃⁽¹⁾⟩ (or ⟨00|V|ψ₃⁽²⁾⟩) along the final eigenbasis.
///
/// With |00⟩ = √2(a ψ₃ − c ψ₀)/(ad − bc) in the final spectrum, the amplitudes are
/// √2 a ⟨ψ₃|W|ψ₃′⟩/(ad − bc) and √2 c ⟨ψ₀|W|ψ₃′⟩/(ad − bc), where ψ₃′ is the initial top state.
/// Refused when the final ψ₀ or ψ₃ has lost one computational component (γ = 0).
pub fn interference_decomposition(
    w: &Propagator,
    spec1: &Spectrum,
    spec2: &Spectrum,
) -> Result<Interference> {
    let (initial, fin) = match w.protocol.direction {
        Direction::Expansion => (spec1, spec2),
        Direction::Compression => (spec2, spec1),
    };
    let co = fin.coefficients;
    if co.a.abs() < 1e-12 || co.d.abs() < 1e-12 {
        return Err(Error::DegenerateSpectrum(
            "eigenstates are computational basis states; no interference decomposition".into(),
        ));
    }
    let det = co.a * co.d - co.b * co.c;
    if !(det.abs() > f64::MIN_POSITIVE) {
        return Err(Error::DegenerateSpectrum(format!("a·d − b·c = {det:e}")));
    }
    let start = initial.state(3);
    let amp_a = w.u.matrix_element(fin.state(3), start) * (SQRT_2 * co.a / det);
    let amp_b = w.u.matrix_element(fin.state(0), start) * (SQRT_2 * co.c / det);
    Ok(Interference {
        amp_a,
        amp_b,
        total: (amp_a - amp_b).norm_sqr(),
    })
}

/// ξ, λ, δ for the ramp `b_low → b_high` of duration `tau`.
///
/// τ = ∞ returns the adiabatic values without integrating.
pub fn transition_probabilities(
    b_low: f64,
    b_high: f64,
    base: &SpinParams,
    tau: f64,
    steps: usize,
) -> Result<TransitionProbabilities> {
    let spec1 = spectrum(&base.with_field(b_low))?;
    let spec2 = spectrum(&base.with_field(b_high))?;
    if tau == f64::INFINITY {
        return Ok(TransitionProbabilities::adiabatic(&spec1, &spec2));
    }
    let (u, v) = stroke_pair(b_low, b_high, tau, base, steps)?;
    let xi = transition_xi(&u, &spec1, &spec2)?;
    let (lambda, delta) = transition_lambda_delta(&u, &v, &spec1, &spec2)?;
    Ok(TransitionProbabilities {
        xi,
        lambda,
        delta,
        tau,
    })
}
