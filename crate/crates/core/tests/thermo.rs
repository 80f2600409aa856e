use proptest::prelude::*;
use spin_otto::dynamics::{stroke_pair, transition_lambda_delta, transition_probabilities, DEFAULT_STEPS};
use spin_otto::qcore::*;
use spin_otto::thermo::*;

fn cfg_with(gamma: f64, t_high: f64) -> CycleConfig {
    CycleConfig {
        gamma,
        t_high,
        ..Default::default()
    }
}

#[test]
fn partition_function_and_energy_match_scalar_formulas() {
    let p = SpinParams::new(1.0, 1.0, 1.0).unwrap();
    let th = gibbs_state(&build_hamiltonian(&p), 1.0).unwrap();
    let k = 2.0f64.sqrt();
    let z = 2.0 * (2.0 * k).cosh() + 2.0 * 2.0f64.cosh();
    assert!((th.partition_function - z).abs() < 1e-10 * z);
    let e = internal_energy(&th.state, &build_hamiltonian(&p)).unwrap();
    let expect = -4.0 * k * (2.0 * k).sinh() / z - 4.0 * 2.0f64.sinh() / z;
    assert!((e - expect).abs() < 1e-10);
    let s = spectrum(&p).unwrap();
    for (i, energy) in s.energies.iter().enumerate() {
        assert!((th.state.population(s.state(i)) - (-energy).exp() / z).abs() < 1e-12);
    }
}

#[test]
fn quasistatic_closed_form_matches_numeric_cycle_on_grid() {
    for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for t_high in [2.0, 4.0, 6.0, 10.0, 20.0] {
            let cfg = cfg_with(gamma, t_high);
            let closed = quasistatic_closed_form(&cfg).unwrap();
            let num = run_cycle_numeric(&cfg).unwrap();
            for (a, b) in [
                (closed.e_a, num.e_a),
                (closed.e_b, num.e_b),
                (closed.e_c, num.e_c),
                (closed.e_d, num.e_d),
                (closed.w, num.w),
                (closed.q_h, num.q_h),
                (closed.q_l, num.q_l),
            ] {
                assert!((a - b).abs() < 1e-8, "γ={gamma} T_H={t_high}: {a} vs {b}");
            }
            assert!((num.w + num.q_h + num.q_l).abs() < 1e-8);
            if let Some(eta) = num.eta {
                assert!((eta - closed.eta).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn finite_time_closed_form_matches_numeric_cycle() {
    for gamma in [0.0, 0.5, 1.0] {
        for tau in [0.1, 0.3, 1.0, 3.0] {
            let cfg = CycleConfig {
                gamma,
                tau,
                ..Default::default()
            };
            let num = run_cycle_numeric(&cfg).unwrap();
            let xi = transition_probabilities(1.0, 4.0, &cfg.base(), tau, DEFAULT_STEPS).unwrap().xi;
            let closed = finite_time_closed_form(&cfg, xi).unwrap();
            assert!((closed.w - num.w).abs() < 1e-7, "γ={gamma} τ={tau}");
            assert!((closed.q_h - num.q_h).abs() < 1e-7);
            assert!((closed.e_b - num.e_b).abs() < 1e-7 && (closed.e_d - num.e_d).abs() < 1e-7);
            let w_irr = irreversible_work(&cfg).unwrap();
            assert!((w_irr - num.w_irr.unwrap()).abs() < 1e-7);
            assert!(w_irr >= -1e-10);
        }
    }
}

#[test]
fn isotropic_cycle_is_reversible_at_any_speed() {
    for tau in [0.1, 0.5, 1.0, 5.0, 20.0] {
        let cfg = CycleConfig {
            gamma: 0.0,
            tau,
            ..Default::default()
        };
        assert!(irreversible_work(&cfg).unwrap().abs() < 1e-10);
    }
}

#[test]
fn equal_temperatures_never_run_an_engine() {
    for gamma in [0.0, 0.5, 1.0] {
        let r = run_cycle_numeric(&CycleConfig {
            gamma,
            t_high: 1.0,
            ..Default::default()
        })
        .unwrap();
        assert!(r.w >= 0.0);
        assert!(r.eta.is_none());
    }
}

#[test]
fn long_hot_contact_reaches_quasistatic_values() {
    let cfg = cfg_with(0.0, 10.0);
    let closed = quasistatic_closed_form(&cfg).unwrap();
    let last = thermalization_profile(&cfg, &[200.0]).unwrap()[0];
    assert!((last.q_h - closed.q_h).abs() < 1e-5);
    assert!((last.w - closed.w).abs() < 1e-5);
    assert!((last.eta.unwrap() - closed.eta).abs() < 1e-5);
    assert!(last.d < 1e-5);
}

#[test]
fn local_energies_match_reduced_states_at_finite_tau() {
    for (gamma, tau) in [(1.0, 0.3), (0.5, 1.2), (0.2, 4.0)] {
        let cfg = CycleConfig {
            gamma,
            tau,
            ..Default::default()
        };
        let s1 = spectrum(&cfg.params_low()).unwrap();
        let s2 = spectrum(&cfg.params_high()).unwrap();
        let (u, v) = stroke_pair(1.0, 4.0, tau, &cfg.base(), DEFAULT_STEPS).unwrap();
        let (lambda, delta) = transition_lambda_delta(&u, &v, &s1, &s2).unwrap();
        let probs = transition_probabilities(1.0, 4.0, &cfg.base(), tau, DEFAULT_STEPS).unwrap();
        assert_eq!((probs.lambda, probs.delta), (lambda, delta));
        let r = local_finite_time(&cfg, &probs).unwrap();
        let k = cycle_corners(&cfg).unwrap();
        assert!((r.e_al - local_energy(&k.a, 1.0).unwrap()).abs() < 1e-8);
        assert!((r.e_bl - local_energy(&k.b, 4.0).unwrap()).abs() < 1e-8);
        assert!((r.e_cl - local_energy(&k.c, 4.0).unwrap()).abs() < 1e-8);
        assert!((r.e_dl - local_energy(&k.d, 1.0).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn lambda_dip_means_local_outperformance() {
    let cfg = CycleConfig::default();
    let eta_q = local_quasistatic(&cfg).unwrap().eta_l;
    let mut dips = 0;
    for i in 1..=60 {
        let tau = 0.05 * i as f64;
        let probs = transition_probabilities(1.0, 4.0, &cfg.base(), tau, DEFAULT_STEPS).unwrap();
        let r = local_finite_time(&cfg, &probs).unwrap();
        if probs.lambda < r.lambda_inf {
            dips += 1;
            assert!(r.eta_l > eta_q, "τ={tau}: λ below adiabatic but η_L = {}", r.eta_l);
        }
    }
    assert!(dips > 0);
}

#[test]
fn isotropic_local_efficiency_ignores_tau() {
    let cfg = cfg_with(0.0, 10.0);
    let reference = local_quasistatic(&cfg).unwrap().eta_l;
    for tau in [0.1, 0.7, 3.0] {
        let probs = transition_probabilities(1.0, 4.0, &cfg.base(), tau, 256).unwrap();
        let r = local_finite_time(&cfg, &probs).unwrap();
        assert!((r.eta_l - reference).abs() < 1e-12);
    }
}

#[test]
fn slow_ramp_recovers_local_quasistatic_efficiency() {
    let cfg = CycleConfig::default();
    let probs = transition_probabilities(1.0, 4.0, &cfg.base(), 20.0, DEFAULT_STEPS).unwrap();
    let r = local_finite_time(&cfg, &probs).unwrap();
    assert!((r.eta_l - local_quasistatic(&cfg).unwrap().eta_l).abs() < 1e-3);
}

#[test]
fn regime_sweep_contains_refrigerator_and_engine() {
    let regimes: Vec<MachineRegime> = (1..=40)
        .map(|i| run_cycle_numeric(&cfg_with(1.0, 1.0 + 0.05 * i as f64)).unwrap().regime)
        .collect();
    assert!(regimes.contains(&MachineRegime::Refrigerator));
    assert_eq!(run_cycle_numeric(&cfg_with(1.0, 10.0)).unwrap().regime, MachineRegime::Engine);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn carnot_bound_and_first_law(gamma in 0.0..=1.0f64, t_high in 1.01..30.0f64, b_high in 1.5..8.0f64) {
        let cfg = CycleConfig { gamma, t_high, b_high, ..Default::default() };
        let r = run_cycle_numeric(&cfg).unwrap();
        prop_assert!((r.w + r.q_h + r.q_l).abs() < 1e-8);
        if let Some(eta) = r.eta {
            prop_assert!(eta <= 1.0 - cfg.t_low / cfg.t_high + 1e-10);
        }
        prop_assert_eq!(r.regime, classify_machine(&r));
    }

    #[test]
    fn local_efficiency_dominates_single_spin(gamma in 0.0..=1.0f64, b_high in 1.5..8.0f64) {
        let cfg = CycleConfig { gamma, b_high, ..Default::default() };
        let eta_l = local_quasistatic_eff(&cfg).unwrap();
        let eta_s = single_spin_otto_eff(1.0, b_high).unwrap();
        prop_assert!(eta_l >= eta_s - 1e-14);
        if gamma >= 0.1 {
            prop_assert!(eta_l > eta_s);
        }
    }

    #[test]
    fn work_gap_never_positive(gamma in 0.0..=1.0f64) {
        let gap = work_gap(&cfg_with(gamma, 10.0)).unwrap();
        prop_assert!(gap <= 1e-12);
    }
}
