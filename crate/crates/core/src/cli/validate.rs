use serde::Serialize;

use crate::dynamics::{
    evolve_lindblad, microreversibility, stroke_pair, transition_lambda_delta, DissipativeConfig,
    DEFAULT_STEPS,
};
use crate::error::Result;
use crate::qcore::{build_hamiltonian, gibbs_state, numeric_spectrum, spectrum, trace_distance, SpinParams};
use crate::thermo::{
    irreversible_work, local_quasistatic_eff, quasistatic_closed_form, run_cycle_numeric,
    single_spin_otto_eff, work_gap, CycleConfig, MachineRegime,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation, or the failure message.
    pub detail: String,
}

type Check = (&'static str, fn() -> Result<f64>, f64);

const GAMMAS: [f64; 3] = [0.0, 0.5, 1.0];
const TAUS: [f64; 3] = [0.2, 1.0, 5.0];

fn worst(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn gamma_cfg(gamma: f64) -> CycleConfig {
    CycleConfig {
        gamma,
        ..Default::default()
    }
}

fn spectra() -> Result<f64> {
    worst(GAMMAS.iter().flat_map(|&g| {
        [1.0, 4.0].map(move |b| -> Result<f64> {
            let p = SpinParams::new(b, 1.0, g)?;
            let h = build_hamiltonian(&p);
            let (a, n) = (spectrum(&p)?, numeric_spectrum(&p)?);
            let levels = a.energies.iter().zip(&n.energies).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            Ok(levels.max(a.reconstruct().max_abs_diff(&h)))
        })
    }))
}

fn microreversible() -> Result<f64> {
    let mut spread = 0.0f64;
    for &g in &GAMMAS {
        let base = SpinParams::new(1.0, 1.0, g)?;
        let s1 = spectrum(&base)?;
        let s2 = spectrum(&base.with_field(4.0))?;
        for &tau in &TAUS {
            let (u, v) = stroke_pair(1.0, 4.0, tau, &base, DEFAULT_STEPS)?;
            spread = spread.max(microreversibility(&u, &v, &s1, &s2)?.spread());
            transition_lambda_delta(&u, &v, &s1, &s2)?;
        }
    }
    Ok(spread)
}

fn closed_vs_numeric() -> Result<f64> {
    worst(GAMMAS.iter().map(|&g| {
        let cfg = gamma_cfg(g);
        let c = quasistatic_closed_form(&cfg)?;
        let n = run_cycle_numeric(&cfg)?;
        Ok((c.w - n.w).abs().max((c.q_h - n.q_h).abs()))
    }))
}

fn first_law_and_carnot() -> Result<f64> {
    let mut excess = 0.0f64;
    for &g in &GAMMAS {
        for t_h in [1.5, 3.0, 10.0, 20.0] {
            let cfg = CycleConfig {
                t_high: t_h,
                ..gamma_cfg(g)
            };
            let r = run_cycle_numeric(&cfg)?;
            excess = excess.max((r.w + r.q_h + r.q_l).abs());
            if r.regime == MachineRegime::Engine {
                excess = excess.max(r.eta.unwrap_or(0.0) - (1.0 - cfg.t_low / cfg.t_high));
            }
        }
    }
    Ok(excess)
}

fn gibbs_fixed_point() -> Result<f64> {
    let cfg = CycleConfig::default();
    let p = cfg.params_high();
    let rho = gibbs_state(&build_hamiltonian(&p), cfg.t_high)?.state;
    let dcfg = DissipativeConfig::new(p, cfg.t_high, cfg.gamma_rate, 10.0)?;
    let samples: Vec<f64> = (0..=10).map(f64::from).collect();
    worst(evolve_lindblad(&rho, &dcfg, &samples)?.iter().map(|(_, r)| trace_distance(r, &rho)))
}

fn irreversible_work_sign() -> Result<f64> {
    worst(GAMMAS.iter().flat_map(|&g| {
        TAUS.map(move |tau| {
            let w = irreversible_work(&CycleConfig {
                tau,
                ..gamma_cfg(g)
            })?;
            Ok(-w)
        })
    }))
}

fn local_advantage() -> Result<f64> {
    let eta_s = single_spin_otto_eff(1.0, 4.0)?;
    worst(GAMMAS.iter().map(|&g| {
        let cfg = gamma_cfg(g);
        Ok(work_gap(&cfg)?.max(eta_s - local_quasistatic_eff(&cfg)?))
    }))
}

/// Runs each invariant on a small grid and reports the worst violation against its bound.
pub fn invariant_suite() -> Vec<CheckOutcome> {
    let checks: [Check; 7] = [
        ("analytic spectrum matches diagonalization", spectra, 1e-10),
        ("microreversibility of ramp pairs", microreversible, 1e-8),
        ("quasistatic closed form matches numeric cycle", closed_vs_numeric, 1e-8),
        ("first law and Carnot bound", first_law_and_carnot, 1e-10),
        ("Gibbs state is a Lindblad fixed point", gibbs_fixed_point, 1e-8),
        ("irreversible work is non-negative", irreversible_work_sign, 1e-10),
        ("local spin beats single spin", local_advantage, 1e-10),
    ];
    checks
        .into_iter()
        .map(|(name, f, bound)| match f() {
            Ok(v) => CheckOutcome {
                name,
                passed: v <= bound,
                detail: format!("worst {v:.3e} (bound {bound:.0e})"),
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: e.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        for c in invariant_suite() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
