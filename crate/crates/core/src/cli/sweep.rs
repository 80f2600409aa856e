use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::record::{Cell, RunRecord};
use super::Plan;
use crate::dynamics::transition_probabilities;
use crate::error::{Error, Result};
use crate::thermo::{local_finite_time, local_quasistatic, run_cycle_numeric, CycleConfig};

/// Parameters a sweep axis may vary.
pub const SWEEP_AXES: [&str; 5] = ["gamma", "tau", "T_H", "t_h", "B_H"];

/// Quantities taken from the numeric cycle.
const CYCLE_OUTPUTS: [&str; 14] = [
    "E_A", "E_B", "E_C", "E_D", "W1", "W2", "W", "Q_H", "Q_L", "eta", "regime", "xi", "W_irr",
    "closure_distance",
];

/// Quantities taken from the local-spin bookkeeping.
const LOCAL_OUTPUTS: [&str; 12] = [
    "E_AL", "E_BL", "E_CL", "E_DL", "W_L", "Q_HL", "eta_l", "P_L", "lambda", "delta", "lambda_inf",
    "delta_inf",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// A one- or two-axis grid over a base config.
///
/// ```toml
/// outputs = ["W", "eta", "W_irr"]
/// [base]
/// T_H = 10
/// [axis1]
/// name = "gamma"
/// values = [0.0, 0.5, 1.0]
/// [axis2]
/// name = "tau"
/// values = [0.3, 1.0]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default)]
    pub base: CycleConfig,
    pub axis1: Axis,
    #[serde(default)]
    pub axis2: Option<Axis>,
    pub outputs: Vec<String>,
}

impl SweepSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn axes(&self) -> Vec<&Axis> {
        std::iter::once(&self.axis1).chain(self.axis2.as_ref()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        for axis in self.axes() {
            if !SWEEP_AXES.contains(&axis.name.as_str()) {
                return Err(Error::InvalidSweep(format!(
                    "axis '{}' not in {SWEEP_AXES:?}",
                    axis.name
                )));
            }
            if axis.values.is_empty() {
                return Err(Error::InvalidSweep(format!("axis '{}' has no values", axis.name)));
            }
            if axis.values.iter().any(|v| v.is_nan()) || axis.values.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidSweep(format!(
                    "axis '{}' values must be strictly increasing",
                    axis.name
                )));
            }
        }
        if let Some(a2) = &self.axis2 {
            if a2.name == self.axis1.name {
                return Err(Error::InvalidSweep(format!("axis '{}' listed twice", a2.name)));
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::InvalidSweep("no outputs requested".into()));
        }
        for o in &self.outputs {
            if !CYCLE_OUTPUTS.contains(&o.as_str()) && !LOCAL_OUTPUTS.contains(&o.as_str()) {
                return Err(Error::InvalidSweep(format!("unknown output '{o}'")));
            }
        }
        Ok(())
    }

    /// Grid points in row order: axis1 outer, axis2 inner.
    pub fn points(&self) -> Vec<CycleConfig> {
        let mut points = vec![self.base];
        for axis in self.axes() {
            points = points
                .iter()
                .flat_map(|p| {
                    axis.values.iter().map(move |&v| {
                        let mut q = *p;
                        q.set(&axis.name, v).expect("whitelisted axis");
                        q
                    })
                })
                .collect();
        }
        points
    }
}

fn to_cell(v: Option<&Value>) -> Cell {
    match v {
        Some(Value::Number(n)) => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
        Some(Value::String(s)) => Cell::Text(s.clone()),
        Some(Value::Bool(b)) => Cell::Text(b.to_string()),
        _ => Cell::Num(f64::NAN),
    }
}

fn flatten(value: Value, into: &mut serde_json::Map<String, Value>) {
    if let Value::Object(map) = value {
        for (k, v) in map {
            match v {
                Value::Object(_) => flatten(v, into),
                other => {
                    into.insert(k, other);
                }
            }
        }
    }
}

fn evaluate(cfg: &CycleConfig, outputs: &[String]) -> Result<Vec<Vec<Cell>>> {
    let mut fields = serde_json::Map::new();
    let serialize = |e: serde_json::Error| Error::Io(e.to_string());
    if outputs.iter().any(|o| CYCLE_OUTPUTS.contains(&o.as_str())) {
        flatten(serde_json::to_value(run_cycle_numeric(cfg)?).map_err(serialize)?, &mut fields);
    }
    if outputs.iter().any(|o| LOCAL_OUTPUTS.contains(&o.as_str())) {
        let local = if cfg.tau.is_infinite() {
            let mut r = local_quasistatic(cfg)?;
            let total = cfg.t_h + cfg.t_c;
            if total.is_finite() && total > 0.0 {
                r.p_l = Some(r.w_l.abs() / total);
            }
            r
        } else {
            let p = transition_probabilities(cfg.b_low, cfg.b_high, &cfg.base(), cfg.tau, cfg.steps)?;
            local_finite_time(cfg, &p)?
        };
        let mut local_fields = serde_json::Map::new();
        flatten(serde_json::to_value(local).map_err(serialize)?, &mut local_fields);
        // The cycle's own ξ and τ take precedence over the copies nested in the local result.
        for (k, v) in local_fields {
            fields.entry(k).or_insert(v);
        }
    }
    Ok(vec![outputs.iter().map(|o| to_cell(fields.get(o))).collect()])
}

/// Evaluates the grid in parallel and writes `out` plus its JSON sidecar.
///
/// Columns are the axis names, then `outputs`, then `error` (empty on success).
pub fn run_sweep(spec: &SweepSpec, out: &Path) -> Result<RunRecord> {
    spec.validate()?;
    let eval = |c: &CycleConfig| evaluate(c, &spec.outputs);
    let record = Plan {
        name: "sweep".into(),
        base: spec.base,
        axes: spec.axes().iter().map(|a| a.name.clone()).collect(),
        quantities: spec.outputs.clone(),
        points: spec.points(),
        eval: &eval,
        error_column: true,
    }
    .execute()?;
    record.write(out)?;
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = r#"
outputs = ["W", "eta"]
[axis1]
name = "gamma"
values = [0.0, 0.5, 1.0]
[axis2]
name = "tau"
values = [0.5, 20.0]
"#;

    #[test]
    fn parses_and_orders_points() {
        let spec = SweepSpec::from_toml(SPEC).unwrap();
        let pts = spec.points();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[1].gamma, pts[1].tau), (0.0, 20.0));
        assert_eq!((pts[2].gamma, pts[2].tau), (0.5, 0.5));
    }

    #[test]
    fn rejects_bad_specs() {
        let cases = [
            SPEC.replace("\"gamma\"", "\"J\""),
            SPEC.replace("[0.0, 0.5, 1.0]", "[]"),
            SPEC.replace("[0.0, 0.5, 1.0]", "[0.5, 0.5]"),
            SPEC.replace("[\"W\", \"eta\"]", "[]"),
            SPEC.replace("\"eta\"", "\"entropy\""),
            SPEC.replace("\"tau\"", "\"gamma\""),
        ];
        for text in cases {
            assert!(SweepSpec::from_toml(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn local_outputs_resolve() {
        let cfg = CycleConfig {
            tau: 0.5,
            ..Default::default()
        };
        let outs: Vec<String> = ["W", "xi", "lambda", "delta_inf", "eta_l"].map(String::from).into();
        let row = &evaluate(&cfg, &outs).unwrap()[0];
        assert!(row.iter().all(|c| c.as_f64().is_some_and(f64::is_finite)), "{row:?}");
    }
}
