use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::config::CycleConfig;
use crate::dynamics::{evolve_lindblad, relax, stroke_pair, transition_xi, DissipativeConfig};
use crate::error::{Error, Result};
use crate::qcore::{
    build_hamiltonian, gibbs_state, internal_energy, spectrum, trace_distance, DensityMatrix,
    Operator, Spectrum,
};

/// Sign patterns closer to zero than this are not classified.
pub const REGIME_TOL: f64 = 1e-10;
/// Closure distance above which a finite-t_c cycle is flagged as non-cyclic.
pub const CYCLIC_TOL: f64 = 0.01;

/// Operating mode of the cycle. W < 0 is work extracted; Q > 0 is heat absorbed.
///
/// | regime       | Q_H | Q_L | W   |
/// |--------------|-----|-----|-----|
/// | Engine       | > 0 | < 0 | < 0 |
/// | Refrigerator | < 0 | > 0 | > 0 |
/// | Accelerator  | > 0 | < 0 | > 0 |
/// | Heater       | < 0 | < 0 | > 0 |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MachineRegime {
    Engine,
    Refrigerator,
    Accelerator,
    Heater,
    None,
}

impl fmt::Display for MachineRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MachineRegime::Engine => "engine",
            MachineRegime::Refrigerator => "refrigerator",
            MachineRegime::Accelerator => "accelerator",
            MachineRegime::Heater => "heater",
            MachineRegime::None => "none",
        };
        f.write_str(s)
    }
}

pub fn classify(q_h: f64, q_l: f64, w: f64) -> MachineRegime {
    if [q_h, q_l, w].iter().any(|x| x.abs() < REGIME_TOL || !x.is_finite()) {
        return MachineRegime::None;
    }
    match (q_h > 0.0, q_l > 0.0, w > 0.0) {
        (true, false, false) => MachineRegime::Engine,
        (false, true, true) => MachineRegime::Refrigerator,
        (true, false, true) => MachineRegime::Accelerator,
        (false, false, true) => MachineRegime::Heater,
        _ => MachineRegime::None,
    }
}

pub fn classify_machine(r: &CycleResult) -> MachineRegime {
    classify(r.q_h, r.q_l, r.w)
}

/// Energies, work and heat of one numerically executed cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    #[serde(rename = "E_A")]
    pub e_a: f64,
    #[serde(rename = "E_B")]
    pub e_b: f64,
    #[serde(rename = "E_C")]
    pub e_c: f64,
    #[serde(rename = "E_D")]
    pub e_d: f64,
    #[serde(rename = "W1")]
    pub w1: f64,
    #[serde(rename = "W2")]
    pub w2: f64,
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "Q_H")]
    pub q_h: f64,
    #[serde(rename = "Q_L")]
    pub q_l: f64,
    /// −W/Q_H, present only in the engine regime.
    pub eta: Option<f64>,
    pub regime: MachineRegime,
    /// Crossing probability of the ramp, present for finite τ.
    pub xi: Option<f64>,
    /// W_τ − W_{τ→∞}, present for finite τ.
    #[serde(rename = "W_irr")]
    pub w_irr: Option<f64>,
    /// Trace distance between the state after the cold contact and ρ_A.
    pub closure_distance: f64,
    pub non_cyclic: bool,
}

impl CycleResult {
    /// Err(NonCyclicState) when a finite cold contact failed to close the cycle.
    pub fn check_cyclic(&self) -> Result<&Self> {
        if self.non_cyclic {
            Err(Error::NonCyclicState(self.closure_distance))
        } else {
            Ok(self)
        }
    }
}

/// The states at the four corners plus the state after the cold contact.
#[derive(Clone, Debug)]
pub struct CycleCorners {
    pub a: DensityMatrix,
    pub b: DensityMatrix,
    pub c: DensityMatrix,
    pub d: DensityMatrix,
    pub a_final: DensityMatrix,
    pub xi: Option<f64>,
}

/// Σᵢ |ψᵢ(to)⟩⟨ψᵢ(from)|: the τ → ∞ ramp, each eigenstate carried to its partner.
pub fn adiabatic_map(from: &Spectrum, to: &Spectrum) -> Operator {
    let mut m = DMatrix::<C64>::zeros(4, 4);
    for i in 0..4 {
        m += to.state(i) * from.state(i).adjoint();
    }
    Operator::from_matrix(m).expect("square")
}

struct Strokes {
    expansion: Operator,
    compression: Operator,
    xi: Option<f64>,
}

fn strokes(cfg: &CycleConfig, low: &Spectrum, high: &Spectrum) -> Result<Strokes> {
    if cfg.tau.is_infinite() {
        return Ok(Strokes {
            expansion: adiabatic_map(low, high),
            compression: adiabatic_map(high, low),
            xi: None,
        });
    }
    let (u, v) = stroke_pair(cfg.b_low, cfg.b_high, cfg.tau, &cfg.base(), cfg.steps)?;
    let xi = transition_xi(&u, low, high)?;
    Ok(Strokes {
        expansion: u.u,
        compression: v.u,
        xi: Some(xi),
    })
}

fn contact(
    cfg: &CycleConfig,
    rho: &DensityMatrix,
    hot: bool,
) -> Result<DensityMatrix> {
    let (params, temperature, duration) = if hot {
        (cfg.params_high(), cfg.t_high, cfg.t_h)
    } else {
        (cfg.params_low(), cfg.t_low, cfg.t_c)
    };
    if duration.is_infinite() {
        return Ok(gibbs_state(&build_hamiltonian(&params), temperature)?.state);
    }
    let dcfg = DissipativeConfig::with_step(params, temperature, cfg.gamma_rate, duration, cfg.lindblad_dt())?;
    relax(rho, &dcfg)
}

/// Runs the four strokes and returns the corner states.
pub fn cycle_corners(cfg: &CycleConfig) -> Result<CycleCorners> {
    cfg.validate()?;
    let low = spectrum(&cfg.params_low())?;
    let high = spectrum(&cfg.params_high())?;
    let a = gibbs_state(&build_hamiltonian(&cfg.params_low()), cfg.t_low)?.state;
    let s = strokes(cfg, &low, &high)?;
    let b = a.evolve(&s.expansion)?;
    let c = contact(cfg, &b, true)?;
    let d = c.evolve(&s.compression)?;
    let a_final = contact(cfg, &d, false)?;
    Ok(CycleCorners {
        a,
        b,
        c,
        d,
        a_final,
        xi: s.xi,
    })
}

fn bookkeeping(cfg: &CycleConfig, k: &CycleCorners) -> Result<CycleResult> {
    let h_low = build_hamiltonian(&cfg.params_low());
    let h_high = build_hamiltonian(&cfg.params_high());
    let e_a = internal_energy(&k.a, &h_low)?;
    let e_b = internal_energy(&k.b, &h_high)?;
    let e_c = internal_energy(&k.c, &h_high)?;
    let e_d = internal_energy(&k.d, &h_low)?;
    let e_final = internal_energy(&k.a_final, &h_low)?;
    let (w1, w2) = (e_b - e_a, e_d - e_c);
    let q_h = e_c - e_b;
    let q_l = e_final - e_d;
    let w = w1 + w2;
    let regime = classify(q_h, q_l, w);
    let closure_distance = trace_distance(&k.a_final, &k.a)?;
    Ok(CycleResult {
        e_a,
        e_b,
        e_c,
        e_d,
        w1,
        w2,
        w,
        q_h,
        q_l,
        eta: (regime == MachineRegime::Engine).then(|| -w / q_h),
        regime,
        xi: k.xi,
        w_irr: None,
        closure_distance,
        non_cyclic: closure_distance > CYCLIC_TOL,
    })
}

/// Executes A→B→C→D→A with propagators, Lindblad contacts or exact Gibbs corners.
///
/// With finite τ the irreversible work is measured against the same cycle run with
/// adiabatic strokes. With finite t_c the cold contact may not return to ρ_A; Q_L then uses
/// the actual final state and the result is flagged (see [`CycleResult::check_cyclic`]).
pub fn run_cycle_numeric(cfg: &CycleConfig) -> Result<CycleResult> {
    let corners = cycle_corners(cfg)?;
    let mut result = bookkeeping(cfg, &corners)?;
    if cfg.tau.is_finite() {
        let adiabatic = CycleConfig {
            tau: f64::INFINITY,
            ..*cfg
        };
        let reference = bookkeeping(&adiabatic, &cycle_corners(&adiabatic)?)?;
        result.w_irr = Some(result.w - reference.w);
    }
    Ok(result)
}

/// One point of an incomplete hot contact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalizationSample {
    pub t: f64,
    /// Heat absorbed during the hot contact of length t.
    pub q_h: f64,
    /// Cycle work with the contact cut at t and a complete cold contact.
    pub w: f64,
    /// Trace distance from ρ(t) to the hot Gibbs state.
    pub d: f64,
    pub eta: Option<f64>,
}

/// Cuts the hot contact at each sample time and closes the cycle from there.
///
/// A single Lindblad trajectory from ρ_B serves all samples. The cold contact is always
/// complete. Samples are returned in ascending time.
pub fn thermalization_profile(cfg: &CycleConfig, samples: &[f64]) -> Result<Vec<ThermalizationSample>> {
    cfg.validate()?;
    if let Some(bad) = samples.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(Error::InvalidConfig(format!("sample time {bad} must be finite and >= 0")));
    }
    let low = spectrum(&cfg.params_low())?;
    let high = spectrum(&cfg.params_high())?;
    let h_low = build_hamiltonian(&cfg.params_low());
    let h_high = build_hamiltonian(&cfg.params_high());
    let a = gibbs_state(&h_low, cfg.t_low)?.state;
    let reference = gibbs_state(&h_high, cfg.t_high)?.state;
    let s = strokes(cfg, &low, &high)?;
    let b = a.evolve(&s.expansion)?;
    let e_a = internal_energy(&a, &h_low)?;
    let e_b = internal_energy(&b, &h_high)?;

    let t_max = samples.iter().copied().fold(0.0, f64::max);
    let dcfg = DissipativeConfig::with_step(cfg.params_high(), cfg.t_high, cfg.gamma_rate, t_max, cfg.lindblad_dt())?;
    let trajectory = evolve_lindblad(&b, &dcfg, samples)?;

    trajectory
        .into_iter()
        .map(|(t, c)| {
            let d = c.evolve(&s.compression)?;
            let q_h = internal_energy(&c, &h_high)? - e_b;
            let q_l = e_a - internal_energy(&d, &h_low)?;
            let w = -(q_h + q_l);
            let eta = (classify(q_h, q_l, w) == MachineRegime::Engine).then(|| -w / q_h);
            Ok(ThermalizationSample {
                t,
                q_h,
                w,
                d: trace_distance(&c, &reference)?,
                eta,
            })
        })
        .collect()
}

/// First sample time on a uniform grid at which the hot contact is within `threshold`
/// of the Gibbs state and stays there until `t_max`.
pub fn thermalization_time(cfg: &CycleConfig, threshold: f64, t_max: f64, spacing: f64) -> Result<Option<f64>> {
    if !(spacing > 0.0 && t_max > 0.0) {
        return Err(Error::InvalidConfig("grid spacing and t_max must be positive".into()));
    }
    let n = (t_max / spacing).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * spacing).collect();
    let profile = thermalization_profile(cfg, &grid)?;
    let mut crossing = None;
    for s in &profile {
        if s.d < threshold {
            crossing.get_or_insert(s.t);
        } else {
            crossing = None;
        }
    }
    Ok(crossing)
}
