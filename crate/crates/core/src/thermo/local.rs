use serde::{Deserialize, Serialize};

use super::closed_form::{ThermalCoefficients, HEAT_FLOOR};
use super::config::CycleConfig;
use super::cycle::cycle_corners;
use crate::dynamics::{adiabatic_delta, adiabatic_lambda, TransitionProbabilities};
use crate::error::{Error, Result};
use crate::qcore::{internal_energy, local_hamiltonian, partial_trace, spectrum, DensityMatrix, Spin};

/// Tolerance of the reduced-state cross-check on local corner energies.
pub const LOCAL_CHECK_TOL: f64 = 1e-10;

/// Cycle bookkeeping seen by spin 1 alone, with local Hamiltonian B σᶻ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalCycleResult {
    #[serde(rename = "E_AL")]
    pub e_al: f64,
    #[serde(rename = "E_BL")]
    pub e_bl: f64,
    #[serde(rename = "E_CL")]
    pub e_cl: f64,
    #[serde(rename = "E_DL")]
    pub e_dl: f64,
    #[serde(rename = "W_L")]
    pub w_l: f64,
    #[serde(rename = "Q_HL")]
    pub q_hl: f64,
    pub eta_l: f64,
    /// |W_L|/(t_h + t_c + 2τ); absent when any stroke is infinitely long.
    #[serde(rename = "P_L")]
    pub p_l: Option<f64>,
    pub probs: TransitionProbabilities,
    pub lambda_inf: f64,
    pub delta_inf: f64,
}

/// Energy of spin 1 in the state `rho` under field `b`.
pub fn local_energy(rho: &DensityMatrix, b: f64) -> Result<f64> {
    internal_energy(&partial_trace(rho, Spin::First)?, &local_hamiltonian(b))
}

fn assemble(
    cfg: &CycleConfig,
    probs: TransitionProbabilities,
    lambda_inf: f64,
    delta_inf: f64,
) -> Result<LocalCycleResult> {
    let c = ThermalCoefficients::new(cfg);
    let (bl, bh) = (cfg.b_low, cfg.b_high);
    let e_al = -2.0 * bl * (1.0 - 2.0 * delta_inf) * c.u1;
    let e_bl = -2.0 * bh * (1.0 - 2.0 * probs.lambda) * c.u1;
    let e_cl = -2.0 * bh * (1.0 - 2.0 * lambda_inf) * c.u2;
    let e_dl = -2.0 * bl * (1.0 - 2.0 * probs.delta) * c.u2;
    let w_l = (e_bl - e_al) + (e_dl - e_cl);
    let q_hl = e_cl - e_bl;
    if q_hl.abs() < HEAT_FLOOR {
        return Err(Error::ZeroHeat);
    }
    Ok(LocalCycleResult {
        e_al,
        e_bl,
        e_cl,
        e_dl,
        w_l,
        q_hl,
        eta_l: -w_l / q_hl,
        p_l: None,
        probs,
        lambda_inf,
        delta_inf,
    })
}

/// Adiabatic strokes, complete thermalization: E_L = −2B(1 − a²)u at each corner.
///
/// Every local energy is cross-checked against Tr(B σᶻ ρ₁) of the reduced corner state.
/// At γ = 0 the commuting limit a = 0 is used.
pub fn local_quasistatic(cfg: &CycleConfig) -> Result<LocalCycleResult> {
    cfg.validate()?;
    let low = spectrum(&cfg.params_low())?;
    let high = spectrum(&cfg.params_high())?;
    let probs = TransitionProbabilities::adiabatic(&low, &high);
    let r = assemble(cfg, probs, probs.lambda, probs.delta)?;

    let adiabatic = CycleConfig {
        tau: f64::INFINITY,
        t_h: f64::INFINITY,
        t_c: f64::INFINITY,
        ..*cfg
    };
    let k = cycle_corners(&adiabatic)?;
    let reduced = [
        (r.e_al, local_energy(&k.a, cfg.b_low)?),
        (r.e_bl, local_energy(&k.b, cfg.b_high)?),
        (r.e_cl, local_energy(&k.c, cfg.b_high)?),
        (r.e_dl, local_energy(&k.d, cfg.b_low)?),
    ];
    for (i, (closed, traced)) in reduced.iter().enumerate() {
        if (closed - traced).abs() > LOCAL_CHECK_TOL {
            return Err(Error::CrossCheck(format!(
                "local energy at corner {} : closed form {closed} vs reduced state {traced}",
                ["A", "B", "C", "D"][i]
            )));
        }
    }
    Ok(r)
}

/// η_Lq = 1 − B_L(1 − a_L²)/(B_H(1 − a_H²)), independent of the bath temperatures.
pub fn local_quasistatic_eff(cfg: &CycleConfig) -> Result<f64> {
    cfg.validate()?;
    let a_l = spectrum(&cfg.params_low())?.coefficients.a;
    let a_h = spectrum(&cfg.params_high())?.coefficients.a;
    Ok(1.0 - cfg.b_low * (1.0 - a_l * a_l) / (cfg.b_high * (1.0 - a_h * a_h)))
}

/// Finite-time strokes with transition probabilities `probs`, complete thermalization.
///
/// λ_{τ→∞} = a_H²/2 and δ_{τ→∞} = a_L²/2 enter the thermal corners A and C. The power
/// uses the config's contact times, which are then taken as long enough to thermalize.
pub fn local_finite_time(cfg: &CycleConfig, probs: &TransitionProbabilities) -> Result<LocalCycleResult> {
    cfg.validate()?;
    let low = spectrum(&cfg.params_low())?;
    let high = spectrum(&cfg.params_high())?;
    let mut r = assemble(cfg, *probs, adiabatic_lambda(&high), adiabatic_delta(&low))?;
    let total = cfg.t_h + cfg.t_c + 2.0 * probs.tau;
    if total.is_finite() {
        if total <= 0.0 {
            return Err(Error::ZeroDuration);
        }
        r.p_l = Some(r.w_l.abs() / total);
    }
    Ok(r)
}

/// Extracted-work gap (−W_G) − 2(−W_L)
/// = 4[(K_H − B_H) − (K_L − B_L) + (B_H a_H² − B_L a_L²)](u₁ − u₂).
///
/// Negative means two local spins deliver more work than the global pair. The value is
/// computed from this closed form and again as 2W_L − W_G from the cycle formulas; the two
/// must agree.
pub fn work_gap(cfg: &CycleConfig) -> Result<f64> {
    cfg.validate()?;
    let c = ThermalCoefficients::new(cfg);
    let a_l = spectrum(&cfg.params_low())?.coefficients.a;
    let a_h = spectrum(&cfg.params_high())?.coefficients.a;
    let (bl, bh) = (cfg.b_low, cfg.b_high);
    let printed = 4.0
        * ((c.k_high - bh) - (c.k_low - bl) + (bh * a_h * a_h - bl * a_l * a_l))
        * (c.u1 - c.u2);

    let w_global = 4.0 * (c.k_low - c.k_high) * (c.u1 - c.u2);
    let w_local = 2.0 * (bl * (1.0 - a_l * a_l) - bh * (1.0 - a_h * a_h)) * (c.u1 - c.u2);
    let dual = 2.0 * w_local - w_global;
    if (printed - dual).abs() > 1e-10 * (1.0 + printed.abs()) {
        return Err(Error::CrossCheck(format!("work gap {printed} vs {dual}")));
    }
    Ok(printed)
}
