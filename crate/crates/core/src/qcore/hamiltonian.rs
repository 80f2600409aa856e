use serde::{Deserialize, Serialize};

use super::operator::{pauli_x, pauli_y, pauli_z, Operator};
use crate::error::{Error, Result};

/// Control point of the two-spin Hamiltonian: field `b`, coupling `j`, anisotropy `gamma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub b: f64,
    pub j: f64,
    pub gamma: f64,
}

impl SpinParams {
    pub fn new(b: f64, j: f64, gamma: f64) -> Result<Self> {
        let p = SpinParams { b, j, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b.is_finite() && self.b >= 0.0) {
            return Err(Error::InvalidParams(format!("B must be >= 0, got {}", self.b)));
        }
        if !(self.j.is_finite() && self.j > 0.0) {
            return Err(Error::InvalidParams(format!("J must be > 0, got {}", self.j)));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParams(format!(
                "gamma must lie in [0, 1], got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Same coupling, different field.
    pub fn with_field(&self, b: f64) -> Self {
        SpinParams { b, ..*self }
    }

    /// k = sqrt(B² + γ²J²)
    pub fn k(&self) -> f64 {
        self.b.hypot(self.gamma * self.j)
    }

    pub fn gamma_j(&self) -> f64 {
        self.gamma * self.j
    }
}

/// H = B(σ₁ᶻ + σ₂ᶻ) + J[(1+γ)σ₁ˣσ₂ˣ + (1−γ)σ₁ʸσ₂ʸ]
pub fn build_hamiltonian(p: &SpinParams) -> Operator {
    let id = Operator::identity(2);
    let (sx, sy, sz) = (pauli_x(), pauli_y(), pauli_z());
    let zeeman = &sz.kron(&id) + &id.kron(&sz);
    let xx = sx.kron(&sx);
    let yy = sy.kron(&sy);
    let c = |x: f64| num_complex::Complex64::new(x, 0.0);
    let coupling = &xx.scale(c(p.j * (1.0 + p.gamma))) + &yy.scale(c(p.j * (1.0 - p.gamma)));
    &zeeman.scale(c(p.b)) + &coupling
}

/// Single-spin Hamiltonian B σᶻ seen by the local (reduced) working medium.
pub fn local_hamiltonian(b: f64) -> Operator {
    pauli_z().scale(num_complex::Complex64::new(b, 0.0))
}
