"""Smoke test for the spin_otto_py extension module."""

import math

import spin_otto_py as so


def main():
    assert so.single_spin_otto_eff(1.0, 4.0) == 0.75

    p = so.SpinParams(1.0, 1.0, 1.0)
    spec = p.spectrum()
    assert abs(spec["k"] - math.sqrt(2.0)) < 1e-12
    assert len(p.hamiltonian()) == 4
    rho = p.gibbs_state(1.0)
    assert abs(sum(rho[i][i] for i in range(4)) - 1.0) < 1e-12

    cfg = so.CycleConfig(gamma=0.5)
    assert cfg["T_H"] == 10.0 and math.isinf(cfg["tau"])
    numeric = so.run_cycle(cfg)
    closed = so.quasistatic_closed_form(cfg)
    assert abs(numeric["W"] - closed["w"]) < 1e-8
    assert numeric["regime"] == "engine"

    cfg["tau"] = 0.3
    finite = so.run_cycle(cfg)
    assert finite["W_irr"] > 0.0
    assert abs(finite["W_irr"] - so.irreversible_work(cfg)) < 1e-8

    probs = so.transition_probabilities(1.0, 4.0, p, 0.3)
    assert 0.0 <= probs["xi"] <= 1.0
    local = so.local_finite_time(so.CycleConfig(tau=0.3))
    assert local["eta_l"] > so.local_quasistatic_eff(so.CycleConfig())
    assert so.work_gap(so.CycleConfig(gamma=0.0)) == 0.0

    record = so.run_preset("local-workgap", {"gamma": 0.5})
    assert record["columns"] == ["gamma", "work_gap", "eta_Lq", "eta_S"]
    assert len(record["rows"]) == 1 and len(record["metadata"]["config_hash"]) == 64
    assert "power-surface" in so.presets()

    try:
        so.CycleConfig(B_L=5.0)
    except so.SpinOttoError:
        pass
    else:
        raise AssertionError("B_L > B_H accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
