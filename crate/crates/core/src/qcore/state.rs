use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::operator::Operator;
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-10;

/// Physical quantum state: Hermitian, unit trace, positive semidefinite (d ∈ {2, 4}).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        Self::with_tolerance(op, HERMITIAN_TOL, TRACE_TOL, POSITIVITY_TOL)
    }

    /// Validates against caller-chosen tolerances (integrator output uses looser ones).
    pub fn with_tolerance(op: Operator, herm: f64, trace: f64, positivity: f64) -> Result<Self> {
        let d = op.dim();
        if d != 2 && d != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: d,
            });
        }
        if !op.is_hermitian(herm) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > trace || tr.im.abs() > trace {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = op.eigenvalues_hermitian()[0];
        if min < -positivity {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix(op))
    }

    /// `|ψ⟩⟨ψ|` for a normalised ket.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let n = psi.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidState(format!("ket norm {n}")));
        }
        Self::new(Operator::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(Operator::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    /// Symmetrises and renormalises integrator output before validation.
    pub(crate) fn from_evolved(m: DMatrix<C64>, trace_tol: f64, positivity: f64) -> Result<Self> {
        let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self::with_tolerance(Operator::from_matrix(herm)?, 1e-10, trace_tol, positivity)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn operator(&self) -> &Operator {
        &self.0
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.0.matrix()
    }

    /// U ρ U†
    pub fn evolve(&self, u: &Operator) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        let m = &(u * &self.0) * &u.adjoint();
        Self::from_evolved(m.into_matrix(), 1e-10, 1e-10)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.0.eigenvalues_hermitian()[0]
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn population(&self, psi: &DVector<C64>) -> f64 {
        self.0.matrix_element(psi, psi).re
    }
}

/// Canonical state e^{−H/T}/Z together with its partition function.
#[derive(Clone, Debug)]
pub struct ThermalState {
    pub state: DensityMatrix,
    pub partition_function: f64,
    pub log_partition: f64,
}

pub fn gibbs_state(h: &Operator, temperature: f64) -> Result<ThermalState> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::InvalidState("Hamiltonian is not Hermitian".into()));
    }
    let (energies, vectors) = h.eigh();
    let e_min = energies[0];
    let weights: Vec<f64> = energies
        .iter()
        .map(|e| (-(e - e_min) / temperature).exp())
        .collect();
    let sum: f64 = weights.iter().sum();
    let d = h.dim();
    let mut rho = DMatrix::<C64>::zeros(d, d);
    for (i, w) in weights.iter().enumerate() {
        let v = vectors.column(i);
        rho += (v * v.adjoint()) * C64::new(w / sum, 0.0);
    }
    let log_partition = sum.ln() - e_min / temperature;
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    Ok(ThermalState {
        state: DensityMatrix::new(Operator::from_matrix(rho)?)?,
        partition_function: log_partition.exp(),
        log_partition,
    })
}

/// Tr(ρH)
pub fn internal_energy(rho: &DensityMatrix, h: &Operator) -> Result<f64> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: h.dim(),
        });
    }
    let e = (rho.operator() * h).trace();
    if e.im.abs() > 1e-10 * (1.0 + e.re.abs()) {
        return Err(Error::InvalidState(format!(
            "energy has imaginary part {:e}",
            e.im
        )));
    }
    Ok(e.re)
}

/// Which spin of the pair survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    First,
    Second,
}

/// Reduced single-spin state of a two-spin density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: Spin) -> Result<DensityMatrix> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let idx = |kept: usize, traced: usize| match keep {
        Spin::First => 2 * kept + traced,
        Spin::Second => 2 * traced + kept,
    };
    let reduced = DMatrix::from_fn(2, 2, |r, c| {
        (0..2).map(|t| m[(idx(r, t), idx(c, t))]).sum::<C64>()
    });
    DensityMatrix::from_evolved(reduced, 1e-10, 1e-10)
}

/// ½ Tr|ρ − σ|
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let diff = rho.operator() - sigma.operator();
    Ok(0.5 * diff.eigenvalues_hermitian().iter().map(|x| x.abs()).sum::<f64>())
}
