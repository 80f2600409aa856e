//! Named sweeps with fixed column schemas, one per standard plot.
//!
//! | preset | columns |
//! |---|---|
//! | `regimes-vs-TH` | T_H, Q_H, Q_L, W, regime |
//! | `quasistatic-eff` | gamma, W, Q_H, eta |
//! | `finite-time-xi-wirr` | gamma, tau, xi, W_irr, W, eta |
//! | `thermalization` | gamma, t_h, Q_Ht, W_t, D, eta_t |
//! | `local-workgap` | gamma, work_gap, eta_Lq, eta_S |
//! | `local-eff-vs-tau` | tau, lambda, delta, lambda_inf, delta_inf, eta_Ltau, eta_Lq |
//! | `local-eff-vs-gamma` | gamma, tau, eta_Ltau, eta_Lq |
//! | `power-surface` | tau, P_L, eta_Ltau |
//!
//! An override naming a swept parameter pins that axis to the single overridden value.
//! Efficiencies outside the engine regime are written as NaN.

use super::record::{Cell, RunRecord};
use super::{apply_overrides, Plan};
use crate::dynamics::transition_probabilities;
use crate::error::{Error, Result};
use crate::thermo::{
    finite_time_closed_form, irreversible_work_from_xi, local_finite_time, local_quasistatic_eff,
    run_cycle_numeric, single_spin_otto_eff, thermalization_profile, work_gap, CycleConfig,
};

pub const PRESETS: [&str; 8] = [
    "regimes-vs-TH",
    "quasistatic-eff",
    "finite-time-xi-wirr",
    "thermalization",
    "local-workgap",
    "local-eff-vs-tau",
    "local-eff-vs-gamma",
    "power-surface",
];

/// Upper end of the hot-bath temperature sweep.
const T_H_MAX: f64 = 20.0;
/// Hot-contact horizon and sample spacing of the thermalization preset.
const T_H_HORIZON: f64 = 200.0;
const T_H_SPACING: f64 = 1.0;

fn grid(step: f64, first: usize, last: usize) -> Vec<f64> {
    (first..=last).map(|i| i as f64 * step).collect()
}

struct Layout {
    axes: &'static [&'static str],
    quantities: &'static [&'static str],
}

fn layout(name: &str) -> Result<Layout> {
    let (axes, quantities): (&[&str], &[&str]) = match name {
        "regimes-vs-TH" => (&["T_H"], &["Q_H", "Q_L", "W", "regime"]),
        "quasistatic-eff" => (&["gamma"], &["W", "Q_H", "eta"]),
        "finite-time-xi-wirr" => (&["gamma", "tau"], &["xi", "W_irr", "W", "eta"]),
        "thermalization" => (&["gamma"], &["t_h", "Q_Ht", "W_t", "D", "eta_t"]),
        "local-workgap" => (&["gamma"], &["work_gap", "eta_Lq", "eta_S"]),
        "local-eff-vs-tau" => (
            &["tau"],
            &["lambda", "delta", "lambda_inf", "delta_inf", "eta_Ltau", "eta_Lq"],
        ),
        "local-eff-vs-gamma" => (&["gamma", "tau"], &["eta_Ltau", "eta_Lq"]),
        "power-surface" => (&["tau"], &["P_L", "eta_Ltau"]),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(Layout { axes, quantities })
}

/// Full column list of a preset, axes first.
pub fn preset_columns(name: &str) -> Result<Vec<String>> {
    let l = layout(name)?;
    Ok(l.axes.iter().chain(l.quantities).map(|s| s.to_string()).collect())
}

/// Default axis values; `cfg` is the resolved base (used for T_L).
fn default_axis(name: &str, axis: &str, cfg: &CycleConfig) -> Vec<f64> {
    let unit_gamma = grid(0.01, 0, 100);
    match (name, axis) {
        ("regimes-vs-TH", "T_H") => {
            let n = ((T_H_MAX - cfg.t_low) / 0.05 + 1e-9).floor().max(1.0) as usize;
            (1..=n).map(|i| cfg.t_low + i as f64 * 0.05).collect()
        }
        ("finite-time-xi-wirr", "gamma") => vec![0.0, 0.25, 0.5, 0.75, 1.0],
        ("finite-time-xi-wirr", "tau") => grid(0.05, 1, 100),
        ("thermalization", "gamma") => vec![0.0, 1.0],
        ("local-eff-vs-tau", "tau") => grid(0.05, 1, 100),
        ("local-eff-vs-gamma", "gamma") => grid(0.05, 0, 20),
        ("local-eff-vs-gamma", "tau") => vec![0.3, 20.0],
        ("power-surface", "tau") => grid(0.05, 1, 200),
        (_, "gamma") => unit_gamma,
        _ => unreachable!("no default for axis {axis} of {name}"),
    }
}

/// Preset-specific base values applied before the user's overrides.
fn preset_base(name: &str, mut cfg: CycleConfig) -> CycleConfig {
    if name == "power-surface" {
        cfg.t_h = 100.0;
        cfg.t_c = 220.0;
    }
    cfg
}

fn evaluate(name: &str, cfg: &CycleConfig) -> Result<Vec<Vec<Cell>>> {
    let one = |cells: Vec<Cell>| Ok(vec![cells]);
    match name {
        "regimes-vs-TH" => {
            let r = run_cycle_numeric(cfg)?;
            one(vec![r.q_h.into(), r.q_l.into(), r.w.into(), Cell::Text(r.regime.to_string())])
        }
        "quasistatic-eff" => {
            let r = run_cycle_numeric(cfg)?;
            one(vec![r.w.into(), r.q_h.into(), Cell::opt(r.eta)])
        }
        "finite-time-xi-wirr" => {
            let p = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
            let f = finite_time_closed_form(cfg, p.xi)?;
            let w_irr = irreversible_work_from_xi(cfg, p.xi)?;
            let eta = (f.w < 0.0 && f.q_h > 0.0).then_some(f.eta);
            one(vec![p.xi.into(), w_irr.into(), f.w.into(), Cell::opt(eta)])
        }
        "thermalization" => {
            let samples = if cfg.t_h.is_finite() {
                vec![cfg.t_h]
            } else {
                grid(T_H_SPACING, 0, (T_H_HORIZON / T_H_SPACING).round() as usize)
            };
            let prof = thermalization_profile(cfg, &samples)?;
            Ok(prof
                .into_iter()
                .map(|s| vec![s.t.into(), s.q_h.into(), s.w.into(), s.d.into(), Cell::opt(s.eta)])
                .collect())
        }
        "local-workgap" => one(vec![
            work_gap(cfg)?.into(),
            local_quasistatic_eff(cfg)?.into(),
            single_spin_otto_eff(cfg.b_low, cfg.b_high)?.into(),
        ]),
        "local-eff-vs-tau" => {
            let p = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
            let r = local_finite_time(cfg, &p)?;
            one(vec![
                p.lambda.into(),
                p.delta.into(),
                r.lambda_inf.into(),
                r.delta_inf.into(),
                r.eta_l.into(),
                local_quasistatic_eff(cfg)?.into(),
            ])
        }
        "local-eff-vs-gamma" => {
            let p = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
            let r = local_finite_time(cfg, &p)?;
            one(vec![r.eta_l.into(), local_quasistatic_eff(cfg)?.into()])
        }
        "power-surface" => {
            let p = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
            let r = local_finite_time(cfg, &p)?;
            one(vec![Cell::opt(r.p_l), r.eta_l.into()])
        }
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

/// Runs a preset on the default config plus `overrides`.
pub fn run_preset(name: &str, overrides: &[(String, f64)]) -> Result<RunRecord> {
    run_preset_with(name, CycleConfig::default(), overrides)
}

/// Runs a preset on `base` (e.g. loaded from a file) plus `overrides`.
pub fn run_preset_with(name: &str, base: CycleConfig, overrides: &[(String, f64)]) -> Result<RunRecord> {
    let l = layout(name)?;
    let mut cfg = preset_base(name, base);
    apply_overrides(&mut cfg, overrides)?;
    cfg.validate()?;

    let mut points = vec![cfg];
    for axis in l.axes {
        let values = if overrides.iter().any(|(k, _)| k == axis) {
            vec![cfg.get(axis)?]
        } else {
            default_axis(name, axis, &cfg)
        };
        points = points
            .iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = *p;
                    q.set(axis, v).expect("axis keys are config keys");
                    q
                })
            })
            .collect();
    }

    let eval = |c: &CycleConfig| evaluate(name, c);
    Plan {
        name: name.to_string(),
        base: cfg,
        axes: l.axes.iter().map(|s| s.to_string()).collect(),
        quantities: l.quantities.iter().map(|s| s.to_string()).collect(),
        points,
        eval: &eval,
        error_column: false,
    }
    .execute()
}
