use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::DEFAULT_STEPS;
use crate::error::{Error, Result};
use crate::thermo::CycleConfig;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Cell {
        Cell::Num(x.unwrap_or(f64::NAN))
    }

    /// 17 significant digits: every finite f64 parses back to itself.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "NaN".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub unitary_scheme: String,
    pub unitary_steps: usize,
    pub lindblad_scheme: String,
    pub lindblad_dt: f64,
}

impl IntegratorSettings {
    pub fn from_config(cfg: &CycleConfig) -> Self {
        IntegratorSettings {
            unitary_scheme: "commutator-free Magnus, order 4".into(),
            unitary_steps: cfg.steps,
            lindblad_scheme: "classical RK4, fixed step".into(),
            lindblad_dt: cfg.lindblad_dt(),
        }
    }
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self::from_config(&CycleConfig {
            steps: DEFAULT_STEPS,
            ..Default::default()
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub name: String,
    pub tool_version: String,
    pub config_hash: String,
    pub config: CycleConfig,
    pub integrator: IntegratorSettings,
    pub wall_time_s: f64,
    pub rows: usize,
    /// Per-row failures as "row index: message".
    pub row_errors: Vec<String>,
}

/// Header plus rows of one preset or sweep run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: Metadata,
}

/// sha256 over the canonical JSON of everything that determines the rows.
pub fn config_hash<T: Serialize>(what: &T) -> String {
    let json = serde_json::to_string(what).expect("config serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

impl RunRecord {
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn sidecar_path(csv_path: &Path) -> PathBuf {
        csv_path.with_extension("json")
    }

    /// Writes the CSV and the JSON sidecar next to it.
    pub fn write(&self, csv_path: &Path) -> Result<PathBuf> {
        if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(csv_path, self.to_csv_string()?)?;
        let sidecar = Self::sidecar_path(csv_path);
        let json = serde_json::to_string_pretty(&self.metadata).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(&sidecar, json)?;
        Ok(sidecar)
    }
}

/// Reads a CSV written by [`RunRecord::write`]; numeric-looking cells become numbers.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<Cell>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let columns = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(
            rec?.iter()
                .map(|s| match s.parse::<f64>() {
                    Ok(x) => Cell::Num(x),
                    Err(_) => Cell::Text(s.to_string()),
                })
                .collect(),
        );
    }
    Ok((columns, rows))
}
