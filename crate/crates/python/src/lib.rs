//! Python bindings: spin parameters, cycle configs, cycle runs and presets.
//!
//! Results come back as plain dicts keyed like the CSV/JSON output.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde::Serialize;
use serde_json::Value;

use spin_otto::cli::{run_preset as run_preset_rs, Cell, PRESETS};
use spin_otto::dynamics::transition_probabilities as probs_rs;
use spin_otto::qcore::{build_hamiltonian, gibbs_state as gibbs_rs, spectrum as spectrum_rs};
use spin_otto::thermo as th;

create_exception!(spin_otto_py, SpinOttoError, PyValueError);

fn err(e: spin_otto::Error) -> PyErr {
    SpinOttoError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        Value::String(s) if s == "inf" => f64::INFINITY.into_bound_py_any(py),
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| SpinOttoError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn matrix_to_py<'py>(py: Python<'py>, op: &spin_otto::qcore::Operator) -> PyResult<Bound<'py, PyAny>> {
    let m = op.matrix();
    let rows: Vec<Vec<num_complex::Complex64>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect();
    rows.into_bound_py_any(py)
}

/// Coupling parameters (B, J, γ) of the two-spin medium.
#[pyclass(name = "SpinParams", module = "spin_otto_py", from_py_object)]
#[derive(Clone, Copy)]
struct PySpinParams(spin_otto::qcore::SpinParams);

#[pymethods]
impl PySpinParams {
    #[new]
    #[pyo3(signature = (b, j = 1.0, gamma = 1.0))]
    fn new(b: f64, j: f64, gamma: f64) -> PyResult<Self> {
        spin_otto::qcore::SpinParams::new(b, j, gamma).map(Self).map_err(err)
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b
    }

    #[getter]
    fn j(&self) -> f64 {
        self.0.j
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    /// sqrt(B² + (γJ)²)
    #[getter]
    fn k(&self) -> f64 {
        self.0.k()
    }

    /// 4×4 Hamiltonian as nested lists of complex numbers.
    fn hamiltonian<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        matrix_to_py(py, &build_hamiltonian(&self.0))
    }

    /// Dict with `energies`, `k` and the overlap coefficients `a`, `b`, `c`, `d`.
    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let s = spectrum_rs(&self.0).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("energies", s.energies.to_vec())?;
        d.set_item("k", s.k)?;
        let c = s.coefficients;
        for (name, x) in [("a", c.a), ("b", c.b), ("c", c.c), ("d", c.d)] {
            d.set_item(name, x)?;
        }
        Ok(d.into_any())
    }

    /// Gibbs state at temperature `t` as nested lists.
    fn gibbs_state<'py>(&self, py: Python<'py>, t: f64) -> PyResult<Bound<'py, PyAny>> {
        let g = gibbs_rs(&build_hamiltonian(&self.0), t).map_err(err)?;
        matrix_to_py(py, g.state.operator())
    }

    fn __repr__(&self) -> String {
        format!("SpinParams(b={}, j={}, gamma={})", self.0.b, self.0.j, self.0.gamma)
    }
}

/// Cycle configuration; keyword arguments use the config-file keys (B_L, T_H, tau, ...).
#[pyclass(name = "CycleConfig", module = "spin_otto_py", from_py_object)]
#[derive(Clone, Copy)]
struct PyCycleConfig(th::CycleConfig);

#[pymethods]
impl PyCycleConfig {
    #[new]
    #[pyo3(signature = (**kwargs))]
    fn new(kwargs: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let mut cfg = th::CycleConfig::default();
        if let Some(kw) = kwargs {
            for (k, v) in kw.iter() {
                cfg.set(&k.extract::<String>()?, v.extract::<f64>()?).map_err(err)?;
            }
        }
        cfg.validate().map_err(err)?;
        Ok(Self(cfg))
    }

    /// Parses a TOML config document.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let cfg: th::CycleConfig = toml::from_str(text).map_err(|e| SpinOttoError::new_err(e.to_string()))?;
        cfg.validate().map_err(err)?;
        Ok(Self(cfg))
    }

    fn to_toml(&self) -> PyResult<String> {
        toml::to_string(&self.0).map_err(|e| SpinOttoError::new_err(e.to_string()))
    }

    fn __getitem__(&self, key: &str) -> PyResult<f64> {
        self.0.get(key).map_err(err)
    }

    fn __setitem__(&mut self, key: &str, value: f64) -> PyResult<()> {
        let mut next = self.0;
        next.set(key, value).map_err(err)?;
        next.validate().map_err(err)?;
        self.0 = next;
        Ok(())
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("CycleConfig({})", serde_json::to_string(&self.0).unwrap_or_default())
    }
}

/// Numeric four-stroke cycle; dict with E_A..E_D, W, Q_H, Q_L, eta, regime, xi, W_irr.
#[pyfunction]
fn run_cycle<'py>(py: Python<'py>, cfg: PyCycleConfig) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| th::run_cycle_numeric(&cfg.0)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn quasistatic_closed_form<'py>(py: Python<'py>, cfg: PyCycleConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &th::quasistatic_closed_form(&cfg.0).map_err(err)?)
}

#[pyfunction]
fn finite_time_closed_form<'py>(py: Python<'py>, cfg: PyCycleConfig, xi: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &th::finite_time_closed_form(&cfg.0, xi).map_err(err)?)
}

#[pyfunction]
fn irreversible_work(cfg: PyCycleConfig) -> PyResult<f64> {
    th::irreversible_work(&cfg.0).map_err(err)
}

#[pyfunction]
fn single_spin_otto_eff(b_low: f64, b_high: f64) -> PyResult<f64> {
    th::single_spin_otto_eff(b_low, b_high).map_err(err)
}

/// ξ, λ, δ for a ramp b_low → b_high of duration tau (inf for adiabatic).
#[pyfunction]
#[pyo3(signature = (b_low, b_high, params, tau, steps = spin_otto::dynamics::DEFAULT_STEPS))]
fn transition_probabilities<'py>(
    py: Python<'py>,
    b_low: f64,
    b_high: f64,
    params: PySpinParams,
    tau: f64,
    steps: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = py.detach(|| probs_rs(b_low, b_high, &params.0, tau, steps)).map_err(err)?;
    to_py(py, &p)
}

#[pyfunction]
fn local_quasistatic<'py>(py: Python<'py>, cfg: PyCycleConfig) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &th::local_quasistatic(&cfg.0).map_err(err)?)
}

#[pyfunction]
fn local_quasistatic_eff(cfg: PyCycleConfig) -> PyResult<f64> {
    th::local_quasistatic_eff(&cfg.0).map_err(err)
}

/// Local-spin cycle with λ, δ taken from ramps of the config's tau.
#[pyfunction]
fn local_finite_time<'py>(py: Python<'py>, cfg: PyCycleConfig) -> PyResult<Bound<'py, PyAny>> {
    let c = cfg.0;
    let r = py
        .detach(|| {
            let p = probs_rs(c.b_low, c.b_high, &c.base(), c.tau, c.steps)?;
            th::local_finite_time(&c, &p)
        })
        .map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn work_gap(cfg: PyCycleConfig) -> PyResult<f64> {
    th::work_gap(&cfg.0).map_err(err)
}

/// Hot contact cut at each sample time; list of dicts (t, q_h, w, d, eta).
#[pyfunction]
fn thermalization_profile<'py>(py: Python<'py>, cfg: PyCycleConfig, samples: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    let p = py.detach(|| th::thermalization_profile(&cfg.0, &samples)).map_err(err)?;
    to_py(py, &p)
}

#[pyfunction]
#[pyo3(signature = (cfg, threshold = 1e-5, t_max = 300.0, spacing = 0.5))]
fn thermalization_time(py: Python<'_>, cfg: PyCycleConfig, threshold: f64, t_max: f64, spacing: f64) -> PyResult<Option<f64>> {
    py.detach(|| th::thermalization_time(&cfg.0, threshold, t_max, spacing)).map_err(err)
}

#[pyfunction]
fn presets() -> Vec<&'static str> {
    PRESETS.to_vec()
}

/// Runs a preset; returns {"columns", "rows", "metadata"}. Overrides pin swept axes.
#[pyfunction]
#[pyo3(signature = (name, overrides = None))]
fn run_preset<'py>(py: Python<'py>, name: &str, overrides: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let mut ov = Vec::new();
    if let Some(d) = overrides {
        for (k, v) in d.iter() {
            ov.push((k.extract::<String>()?, v.extract::<f64>()?));
        }
    }
    let record = py.detach(|| run_preset_rs(name, &ov)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("columns", record.columns.clone())?;
    let rows = PyList::empty(py);
    for row in &record.rows {
        let cells = PyList::empty(py);
        for c in row {
            match c {
                Cell::Num(x) => cells.append(*x)?,
                Cell::Text(s) => cells.append(s)?,
            }
        }
        rows.append(cells)?;
    }
    out.set_item("rows", rows)?;
    out.set_item("metadata", to_py(py, &record.metadata)?)?;
    Ok(out.into_any())
}

/// Quantum Otto cycle on a two-spin anisotropic XY working medium.
#[pymodule]
fn spin_otto_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SpinOttoError", m.py().get_type::<SpinOttoError>())?;
    m.add_class::<PySpinParams>()?;
    m.add_class::<PyCycleConfig>()?;
    m.add_function(wrap_pyfunction!(run_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(quasistatic_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(finite_time_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(irreversible_work, m)?)?;
    m.add_function(wrap_pyfunction!(single_spin_otto_eff, m)?)?;
    m.add_function(wrap_pyfunction!(transition_probabilities, m)?)?;
    m.add_function(wrap_pyfunction!(local_quasistatic, m)?)?;
    m.add_function(wrap_pyfunction!(local_quasistatic_eff, m)?)?;
    m.add_function(wrap_pyfunction!(local_finite_time, m)?)?;
    m.add_function(wrap_pyfunction!(work_gap, m)?)?;
    m.add_function(wrap_pyfunction!(thermalization_profile, m)?)?;
    m.add_function(wrap_pyfunction!(thermalization_time, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    m.add_function(wrap_pyfunction!(run_preset, m)?)?;
    Ok(())
}
