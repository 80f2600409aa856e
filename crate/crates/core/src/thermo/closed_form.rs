use serde::{Deserialize, Serialize};

use super::config::CycleConfig;
use crate::dynamics::transition_probabilities;
use crate::error::{Error, Result};

/// |Q_H| below this makes an efficiency meaningless.
pub const HEAT_FLOOR: f64 = 1e-12;

/// Gibbs-weight combinations of the two thermal corners, already divided by Z.
///
/// `u1 = sinh(2K_L β_L)/Z₁`, `v1 = sinh(2J β_L)/Z₁` at the cold corner, `u2`, `v2` the same
/// at (K_H, β_H), with Z = 2cosh(2Kβ) + 2cosh(2Jβ).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalCoefficients {
    pub k_low: f64,
    pub k_high: f64,
    pub u1: f64,
    pub v1: f64,
    pub u2: f64,
    pub v2: f64,
}

/// (sinh(2Kβ)/Z, sinh(2Jβ)/Z) without overflow at low temperature.
fn normalized_weights(k: f64, j: f64, temperature: f64) -> (f64, f64) {
    let x = 2.0 * k / temperature;
    let y = 2.0 * j / temperature;
    let m = x.abs().max(y.abs());
    let (xp, xm) = ((x - m).exp(), (-x - m).exp());
    let (yp, ym) = ((y - m).exp(), (-y - m).exp());
    let z = xp + xm + yp + ym;
    (0.5 * (xp - xm) / z, 0.5 * (yp - ym) / z)
}

impl ThermalCoefficients {
    pub fn new(cfg: &CycleConfig) -> Self {
        let k_low = cfg.params_low().k();
        let k_high = cfg.params_high().k();
        let (u1, v1) = normalized_weights(k_low, cfg.j, cfg.t_low);
        let (u2, v2) = normalized_weights(k_high, cfg.j, cfg.t_high);
        ThermalCoefficients {
            k_low,
            k_high,
            u1,
            v1,
            u2,
            v2,
        }
    }
}

/// Corner energies and cycle totals of an analytically evaluated cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormCycle {
    pub e_a: f64,
    pub e_b: f64,
    pub e_c: f64,
    pub e_d: f64,
    pub w: f64,
    pub q_h: f64,
    pub q_l: f64,
    pub eta: f64,
    pub xi: f64,
}

fn efficiency(w: f64, q_h: f64) -> Result<f64> {
    if q_h.abs() < HEAT_FLOOR {
        return Err(Error::ZeroHeat);
    }
    Ok(-w / q_h)
}

/// Adiabatic strokes with complete thermalization.
///
/// E_{A,B} = −4K_{L,H} u₁ − 4J v₁, E_{C,D} = −4K_{H,L} u₂ − 4J v₂,
/// W = 4(K_L − K_H)(u₁ − u₂), Q_H = 4K_H(u₁ − u₂) + 4J(v₁ − v₂), η = −W/Q_H.
pub fn quasistatic_closed_form(cfg: &CycleConfig) -> Result<ClosedFormCycle> {
    cfg.validate()?;
    let c = ThermalCoefficients::new(cfg);
    let j = cfg.j;
    let w = 4.0 * (c.k_low - c.k_high) * (c.u1 - c.u2);
    let q_h = 4.0 * c.k_high * (c.u1 - c.u2) + 4.0 * j * (c.v1 - c.v2);
    Ok(ClosedFormCycle {
        e_a: -4.0 * c.k_low * c.u1 - 4.0 * j * c.v1,
        e_b: -4.0 * c.k_high * c.u1 - 4.0 * j * c.v1,
        e_c: -4.0 * c.k_high * c.u2 - 4.0 * j * c.v2,
        e_d: -4.0 * c.k_low * c.u2 - 4.0 * j * c.v2,
        w,
        q_h,
        q_l: -(w + q_h),
        eta: efficiency(w, q_h)?,
        xi: 0.0,
    })
}

/// Finite-time strokes (crossing probability ξ) with complete thermalization.
///
/// W_τ = 4K_L[u₁ − (1−2ξ)u₂] − 4K_H[(1−2ξ)u₁ − u₂],
/// Q_τ = 4K_H[(1−2ξ)u₁ − u₂] + 4J(v₁ − v₂).
pub fn finite_time_closed_form(cfg: &CycleConfig, xi: f64) -> Result<ClosedFormCycle> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidParams(format!("xi must lie in [0, 1], got {xi}")));
    }
    let c = ThermalCoefficients::new(cfg);
    let j = cfg.j;
    let s = 1.0 - 2.0 * xi;
    let w = 4.0 * c.k_low * (c.u1 - s * c.u2) - 4.0 * c.k_high * (s * c.u1 - c.u2);
    let q_h = 4.0 * c.k_high * (s * c.u1 - c.u2) + 4.0 * j * (c.v1 - c.v2);
    Ok(ClosedFormCycle {
        e_a: -4.0 * c.k_low * c.u1 - 4.0 * j * c.v1,
        e_b: -4.0 * c.k_high * s * c.u1 - 4.0 * j * c.v1,
        e_c: -4.0 * c.k_high * c.u2 - 4.0 * j * c.v2,
        e_d: -4.0 * c.k_low * s * c.u2 - 4.0 * j * c.v2,
        w,
        q_h,
        q_l: -(w + q_h),
        eta: efficiency(w, q_h)?,
        xi,
    })
}

/// Extra work spent by finite-time driving: W_τ − W_{τ→∞} = 8ξ(K_L u₂ + K_H u₁).
///
/// Work is negative when extracted, so lost output shows up as a positive number.
pub fn irreversible_work_from_xi(cfg: &CycleConfig, xi: f64) -> Result<f64> {
    let c = ThermalCoefficients::new(cfg);
    let s = 1.0 - 2.0 * xi;
    let w_tau = |s: f64| 4.0 * c.k_low * (c.u1 - s * c.u2) - 4.0 * c.k_high * (s * c.u1 - c.u2);
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::InvalidParams(format!("xi must lie in [0, 1], got {xi}")));
    }
    Ok(w_tau(s) - w_tau(1.0))
}

/// W^Ir at the config's ramp duration, with ξ from the propagator; zero for τ = ∞.
pub fn irreversible_work(cfg: &CycleConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.tau.is_infinite() {
        return Ok(0.0);
    }
    let probs = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
    irreversible_work_from_xi(cfg, probs.xi)
}

/// 1 − B_L/B_H
pub fn single_spin_otto_eff(b_low: f64, b_high: f64) -> Result<f64> {
    if !(b_low > 0.0 && b_high > b_low && b_high.is_finite()) {
        return Err(Error::InvalidFields {
            low: b_low,
            high: b_high,
        });
    }
    Ok(1.0 - b_low / b_high)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_spin_examples() {
        assert_eq!(single_spin_otto_eff(1.0, 4.0).unwrap(), 0.75);
        assert_eq!(single_spin_otto_eff(2.0, 8.0).unwrap(), 0.75);
        let eps = 1e-6;
        assert!((single_spin_otto_eff(1.0, 1.0 + eps).unwrap() - eps / (1.0 + eps)).abs() < 1e-15);
        assert!(single_spin_otto_eff(4.0, 1.0).is_err());
        assert!(single_spin_otto_eff(0.0, 1.0).is_err());
    }

    #[test]
    fn weights_match_direct_evaluation() {
        let (u, v) = normalized_weights(2.0f64.sqrt(), 1.0, 1.0);
        let x = 2.0 * 2.0f64.sqrt();
        let z = 2.0 * x.cosh() + 2.0 * 2.0f64.cosh();
        assert!((u - x.sinh() / z).abs() < 1e-15);
        assert!((v - 2.0f64.sinh() / z).abs() < 1e-15);
        let (u, _) = normalized_weights(4.0, 1.0, 1e-3);
        assert!((u - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_crossing_reproduces_quasistatic() {
        for gamma in [0.0, 0.4, 1.0] {
            let cfg = CycleConfig {
                gamma,
                ..Default::default()
            };
            let q = quasistatic_closed_form(&cfg).unwrap();
            let f = finite_time_closed_form(&cfg, 0.0).unwrap();
            assert!((q.w - f.w).abs() < 1e-12);
            assert!((q.q_h - f.q_h).abs() < 1e-12);
            assert!((q.eta - f.eta).abs() < 1e-12);
        }
    }

    #[test]
    fn half_crossing_kills_the_outer_sector() {
        let cfg = CycleConfig::default();
        let f = finite_time_closed_form(&cfg, 0.5).unwrap();
        let c = ThermalCoefficients::new(&cfg);
        assert!((f.w - 4.0 * (c.k_low * c.u1 + c.k_high * c.u2)).abs() < 1e-12);
        assert!((f.q_h - (-4.0 * c.k_high * c.u2 + 4.0 * cfg.j * (c.v1 - c.v2))).abs() < 1e-12);
    }

    #[test]
    fn equal_fields_do_no_work() {
        let cfg = CycleConfig {
            b_high: 1.0,
            ..Default::default()
        };
        assert_eq!(quasistatic_closed_form(&cfg).unwrap().w, 0.0);
    }

    #[test]
    fn irreversible_work_is_nonnegative_and_linear() {
        let cfg = CycleConfig::default();
        assert_eq!(irreversible_work_from_xi(&cfg, 0.0).unwrap(), 0.0);
        let a = irreversible_work_from_xi(&cfg, 0.1).unwrap();
        let b = irreversible_work_from_xi(&cfg, 0.2).unwrap();
        assert!(a > 0.0 && (b - 2.0 * a).abs() < 1e-12);
        assert!(irreversible_work_from_xi(&cfg, 1.5).is_err());
        assert_eq!(irreversible_work(&cfg).unwrap(), 0.0);
    }
}
