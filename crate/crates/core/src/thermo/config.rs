use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::{default_dt, DEFAULT_STEPS, MIN_STEPS};
use crate::error::{Error, Result};
use crate::qcore::SpinParams;

/// Durations accept a number or the strings "inf" / "infinity" (complete stroke).
pub mod duration {
    use super::*;

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if value.is_infinite() && *value > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn parse(text: &str) -> Option<f64> {
        match text.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Some(f64::INFINITY),
            other => other.parse().ok(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) => {
                parse(&t).ok_or_else(|| serde::de::Error::custom(format!("not a duration: {t}")))
            }
        }
    }
}

/// One Otto cycle: fields, coupling, baths, stroke durations and integrator controls.
///
/// Durations equal to `f64::INFINITY` mean an adiabatic ramp (`tau`) or complete
/// thermalization (`t_h`, `t_c`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleConfig {
    #[serde(rename = "B_L")]
    pub b_low: f64,
    #[serde(rename = "B_H")]
    pub b_high: f64,
    #[serde(rename = "J")]
    pub j: f64,
    pub gamma: f64,
    #[serde(rename = "T_L")]
    pub t_low: f64,
    #[serde(rename = "T_H")]
    pub t_high: f64,
    #[serde(with = "duration")]
    pub tau: f64,
    #[serde(with = "duration")]
    pub t_h: f64,
    #[serde(with = "duration")]
    pub t_c: f64,
    #[serde(rename = "Gamma")]
    pub gamma_rate: f64,
    /// Magnus steps per unitary ramp.
    pub steps: usize,
    /// Lindblad RK4 step; 0 selects the Γ-scaled default.
    pub dt: f64,
}

impl Default for CycleConfig {
    fn default() -> Self {
        CycleConfig {
            b_low: 1.0,
            b_high: 4.0,
            j: 1.0,
            gamma: 1.0,
            t_low: 1.0,
            t_high: 10.0,
            tau: f64::INFINITY,
            t_h: f64::INFINITY,
            t_c: f64::INFINITY,
            gamma_rate: 0.1,
            steps: DEFAULT_STEPS,
            dt: 0.0,
        }
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("{name} must be finite and > 0, got {x}")))
    }
}

impl CycleConfig {
    /// Field and temperature orderings are checked non-strictly so the degenerate
    /// B_L = B_H and T_L = T_H cycles remain expressible.
    pub fn validate(&self) -> Result<()> {
        positive("B_L", self.b_low)?;
        positive("B_H", self.b_high)?;
        positive("T_L", self.t_low)?;
        positive("T_H", self.t_high)?;
        positive("Gamma", self.gamma_rate)?;
        if self.b_low > self.b_high {
            return Err(Error::InvalidConfig(format!(
                "need B_L <= B_H, got {} > {}",
                self.b_low, self.b_high
            )));
        }
        if self.t_low > self.t_high {
            return Err(Error::InvalidConfig(format!(
                "need T_L <= T_H, got {} > {}",
                self.t_low, self.t_high
            )));
        }
        for (name, d) in [("tau", self.tau), ("t_h", self.t_h), ("t_c", self.t_c)] {
            if !(d >= 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be >= 0, got {d}")));
            }
        }
        if self.tau == 0.0 {
            return Err(Error::InvalidConfig("tau must be > 0 (use a tiny value for a quench)".into()));
        }
        if self.steps < MIN_STEPS {
            return Err(Error::StepsTooFew {
                steps: self.steps,
                min: MIN_STEPS,
            });
        }
        if !(self.dt >= 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!("dt must be >= 0, got {}", self.dt)));
        }
        self.base().validate().map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Coupling at the cold-corner field.
    pub fn base(&self) -> SpinParams {
        SpinParams {
            b: self.b_low,
            j: self.j,
            gamma: self.gamma,
        }
    }

    pub fn params_low(&self) -> SpinParams {
        self.base()
    }

    pub fn params_high(&self) -> SpinParams {
        self.base().with_field(self.b_high)
    }

    pub fn lindblad_dt(&self) -> f64 {
        if self.dt > 0.0 {
            self.dt
        } else {
            default_dt(self.gamma_rate)
        }
    }

    /// Sets one field by its config key; used for overrides and sweep axes.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "B_L" => self.b_low = value,
            "B_H" => self.b_high = value,
            "J" => self.j = value,
            "gamma" => self.gamma = value,
            "T_L" => self.t_low = value,
            "T_H" => self.t_high = value,
            "tau" => self.tau = value,
            "t_h" => self.t_h = value,
            "t_c" => self.t_c = value,
            "Gamma" => self.gamma_rate = value,
            "dt" => self.dt = value,
            "steps" => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(Error::InvalidOverride(format!("steps={value}")));
                }
                self.steps = value as usize
            }
            _ => return Err(Error::InvalidOverride(key.to_string())),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<f64> {
        Ok(match key {
            "B_L" => self.b_low,
            "B_H" => self.b_high,
            "J" => self.j,
            "gamma" => self.gamma,
            "T_L" => self.t_low,
            "T_H" => self.t_high,
            "tau" => self.tau,
            "t_h" => self.t_h,
            "t_c" => self.t_c,
            "Gamma" => self.gamma_rate,
            "dt" => self.dt,
            "steps" => self.steps as f64,
            _ => return Err(Error::InvalidOverride(key.to_string())),
        })
    }
}
