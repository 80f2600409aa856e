//! Batch driver: config files, named presets, grid sweeps and CSV/JSON output.

pub mod app;
pub mod presets;
pub mod record;
pub mod sweep;
pub mod validate;

use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::thermo::config::duration;
use crate::thermo::CycleConfig;

pub use presets::{preset_columns, run_preset, run_preset_with, PRESETS};
pub use record::{config_hash, read_csv, Cell, IntegratorSettings, Metadata, RunRecord};
pub use sweep::{run_sweep, Axis, SweepSpec, SWEEP_AXES};
pub use validate::{invariant_suite, CheckOutcome};

/// Env var capping the worker pool.
pub const THREADS_ENV: &str = "SPIN_OTTO_THREADS";

pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Parses `key=value`; durations also accept "inf".
pub fn parse_override(text: &str) -> Result<(String, f64)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| Error::InvalidOverride(text.to_string()))?;
    let key = key.trim().to_string();
    let value = duration::parse(value).ok_or_else(|| Error::InvalidOverride(text.to_string()))?;
    CycleConfig::default()
        .set(&key, value)
        .map_err(|_| Error::InvalidOverride(text.to_string()))?;
    Ok((key, value))
}

pub fn apply_overrides(cfg: &mut CycleConfig, overrides: &[(String, f64)]) -> Result<()> {
    for (k, v) in overrides {
        cfg.set(k, *v)?;
    }
    Ok(())
}

/// Reads a TOML config document; absent keys keep their defaults.
pub fn load_config(path: &Path) -> Result<CycleConfig> {
    let text = fs::read_to_string(path)?;
    let cfg: CycleConfig = toml::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

type Evaluator<'a> = dyn Fn(&CycleConfig) -> Result<Vec<Vec<Cell>>> + Sync + 'a;

/// A grid of configs and the quantities each one contributes.
///
/// Every point yields one or more rows of `quantities`; axis cells are read back from the
/// point's config. A failing point becomes one row of NaN cells.
pub(crate) struct Plan<'a> {
    pub name: String,
    pub base: CycleConfig,
    pub axes: Vec<String>,
    pub quantities: Vec<String>,
    pub points: Vec<CycleConfig>,
    pub eval: &'a Evaluator<'a>,
    /// Append an `error` column holding per-row messages.
    pub error_column: bool,
}

#[derive(Serialize)]
struct PlanIdentity<'a> {
    name: &'a str,
    base: &'a CycleConfig,
    axes: &'a [String],
    quantities: &'a [String],
    points: &'a [CycleConfig],
}

impl Plan<'_> {
    pub fn execute(&self) -> Result<RunRecord> {
        let started = Instant::now();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count())
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        let outcomes: Vec<Result<Vec<Vec<Cell>>>> =
            pool.install(|| self.points.par_iter().map(|p| (self.eval)(p)).collect());

        let mut rows = Vec::new();
        let mut row_errors = Vec::new();
        for (point, outcome) in self.points.iter().zip(outcomes) {
            let axis_cells: Vec<Cell> = self
                .axes
                .iter()
                .map(|a| point.get(a).map(Cell::Num))
                .collect::<Result<_>>()?;
            match outcome {
                Ok(block) => {
                    for q in block {
                        debug_assert_eq!(q.len(), self.quantities.len());
                        let mut row = axis_cells.clone();
                        row.extend(q);
                        if self.error_column {
                            row.push(Cell::Text(String::new()));
                        }
                        rows.push(row);
                    }
                }
                Err(e) => {
                    row_errors.push(format!("{}: {e}", rows.len()));
                    let mut row = axis_cells;
                    row.extend(self.quantities.iter().map(|_| Cell::Num(f64::NAN)));
                    if self.error_column {
                        row.push(Cell::Text(e.to_string()));
                    }
                    rows.push(row);
                }
            }
        }

        let mut columns: Vec<String> = self.axes.iter().chain(&self.quantities).cloned().collect();
        if self.error_column {
            columns.push("error".into());
        }
        let hash = config_hash(&PlanIdentity {
            name: &self.name,
            base: &self.base,
            axes: &self.axes,
            quantities: &self.quantities,
            points: &self.points,
        });
        Ok(RunRecord {
            columns,
            metadata: Metadata {
                name: self.name.clone(),
                tool_version: env!("CARGO_PKG_VERSION").into(),
                config_hash: hash,
                config: self.base,
                integrator: IntegratorSettings::from_config(&self.base),
                wall_time_s: started.elapsed().as_secs_f64(),
                rows: rows.len(),
                row_errors,
            },
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_parse() {
        assert_eq!(parse_override("gamma=0").unwrap(), ("gamma".into(), 0.0));
        assert!(parse_override("tau=inf").unwrap().1.is_infinite());
        assert_eq!(parse_override(" T_H = 5 ").unwrap(), ("T_H".into(), 5.0));
        for bad in ["gamma", "nope=1", "gamma=x", "steps=1.5"] {
            assert!(matches!(parse_override(bad), Err(Error::InvalidOverride(_))), "{bad}");
        }
    }

    #[test]
    fn failing_points_become_nan_rows() {
        let eval = |c: &CycleConfig| -> Result<Vec<Vec<Cell>>> {
            if c.gamma > 0.5 {
                Err(Error::ZeroHeat)
            } else {
                Ok(vec![vec![Cell::Num(c.gamma * 2.0)]])
            }
        };
        let points = [0.0, 1.0]
            .iter()
            .map(|&g| CycleConfig {
                gamma: g,
                ..Default::default()
            })
            .collect();
        let plan = Plan {
            name: "t".into(),
            base: CycleConfig::default(),
            axes: vec!["gamma".into()],
            quantities: vec!["x".into()],
            points,
            eval: &eval,
            error_column: true,
        };
        let r = plan.execute().unwrap();
        assert_eq!(r.columns, ["gamma", "x", "error"]);
        assert_eq!(r.rows[0][1], Cell::Num(0.0));
        assert!(r.rows[1][1].as_f64().unwrap().is_nan());
        assert!(matches!(&r.rows[1][2], Cell::Text(s) if s.contains("heat")));
        assert_eq!(r.metadata.row_errors.len(), 1);
    }
}
