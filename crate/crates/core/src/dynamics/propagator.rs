use nalgebra::{DMatrix, Matrix2, Matrix4};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Operator, SpinParams};

pub const DEFAULT_STEPS: usize = 2000;
pub const MIN_STEPS: usize = 16;
/// Ramps shorter than this are treated as sudden quenches, U = 𝟙.
pub const SUDDEN_LIMIT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Expansion,
    Compression,
}

/// Linear field ramp B(t) over `0 ≤ t ≤ tau`.
///
/// Expansion runs B_L → B_H; compression runs the time-reversed ramp B_H → B_L.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldProtocol {
    pub b_start: f64,
    pub b_end: f64,
    pub tau: f64,
    pub direction: Direction,
}

impl FieldProtocol {
    pub fn expansion(b_low: f64, b_high: f64, tau: f64) -> Result<Self> {
        Self::new(b_low, b_high, tau, Direction::Expansion)
    }

    pub fn compression(b_low: f64, b_high: f64, tau: f64) -> Result<Self> {
        Self::new(b_high, b_low, tau, Direction::Compression)
    }

    fn new(b_start: f64, b_end: f64, tau: f64, direction: Direction) -> Result<Self> {
        let p = FieldProtocol {
            b_start,
            b_end,
            tau,
            direction,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidProtocol(format!("tau must be finite and > 0, got {}", self.tau)));
        }
        if !(self.b_start >= 0.0 && self.b_end >= 0.0) {
            return Err(Error::InvalidProtocol("fields must be non-negative".into()));
        }
        let ordered = match self.direction {
            Direction::Expansion => self.b_start < self.b_end,
            Direction::Compression => self.b_start > self.b_end,
        };
        if !ordered {
            return Err(Error::InvalidProtocol(format!(
                "{:?} from B = {} to B = {}",
                self.direction, self.b_start, self.b_end
            )));
        }
        Ok(())
    }

    pub fn b_low(&self) -> f64 {
        self.b_start.min(self.b_end)
    }

    pub fn b_high(&self) -> f64 {
        self.b_start.max(self.b_end)
    }

    pub fn field_at(&self, t: f64) -> f64 {
        self.b_start + (self.b_end - self.b_start) * (t / self.tau)
    }

    /// The same ramp run in the opposite direction.
    pub fn mirrored(&self) -> Self {
        FieldProtocol {
            b_start: self.b_end,
            b_end: self.b_start,
            tau: self.tau,
            direction: match self.direction {
                Direction::Expansion => Direction::Compression,
                Direction::Compression => Direction::Expansion,
            },
        }
    }
}

/// Time-ordered evolution operator of one unitary stroke.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub u: Operator,
    pub protocol: FieldProtocol,
    pub steps: usize,
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// exp(−i s (hz σᶻ + hx σˣ)) for real hz, hx.
fn su2_exp(hz: f64, hx: f64, s: f64) -> Matrix2<C64> {
    let n = hz.hypot(hx);
    if n == 0.0 {
        return Matrix2::identity();
    }
    let (sin, cos) = (n * s).sin_cos();
    let f = C64::new(0.0, -sin / n);
    Matrix2::new(
        c(cos) + f * hz,
        f * hx,
        f * hx,
        c(cos) - f * hz,
    )
}

/// exp(−i s H(B)) in closed form, using the two invariant sectors of H.
///
/// On `{|00⟩, |11⟩}` H acts as −2B σᶻ + 2γJ σˣ, on `{|01⟩, |10⟩}` as 2J σˣ.
pub(crate) fn hamiltonian_exponential(b: f64, p: &SpinParams, s: f64) -> Matrix4<C64> {
    let outer = su2_exp(-2.0 * b, 2.0 * p.gamma_j(), s);
    let inner = su2_exp(0.0, 2.0 * p.j, s);
    let mut m = Matrix4::zeros();
    let (o0, o1) = (0, 3);
    m[(o0, o0)] = outer[(0, 0)];
    m[(o0, o1)] = outer[(0, 1)];
    m[(o1, o0)] = outer[(1, 0)];
    m[(o1, o1)] = outer[(1, 1)];
    let (i0, i1) = (1, 2);
    m[(i0, i0)] = inner[(0, 0)];
    m[(i0, i1)] = inner[(0, 1)];
    m[(i1, i0)] = inner[(1, 0)];
    m[(i1, i1)] = inner[(1, 1)];
    m
}

fn to_operator(m: &Matrix4<C64>) -> Operator {
    Operator::from_matrix(DMatrix::from_fn(4, 4, |r, c| m[(r, c)]))
        .expect("4x4 is square")
}

/// Time-ordered propagator 𝒯 exp(−i∫H(t)dt) of a field ramp.
///
/// Each of the `steps` sub-intervals is advanced by the fourth-order commutator-free
/// Magnus product exp(−i h(α₁H₁ + α₂H₂)) exp(−i h(α₂H₁ + α₁H₂)), with H₁, H₂ sampled at the
/// two Gauss nodes. Both factors are exact exponentials of Hamiltonians of the same family,
/// so the result is unitary to rounding. Ramps with τ ≤ [`SUDDEN_LIMIT`] return 𝟙.
pub fn propagate_unitary(
    protocol: &FieldProtocol,
    base: &SpinParams,
    steps: usize,
) -> Result<Propagator> {
    protocol.validate()?;
    base.validate()?;
    if steps < MIN_STEPS {
        return Err(Error::StepsTooFew {
            steps,
            min: MIN_STEPS,
        });
    }
    if protocol.tau <= SUDDEN_LIMIT {
        return Ok(Propagator {
            u: Operator::identity(4),
            protocol: *protocol,
            steps,
        });
    }

    let sqrt3 = 3.0f64.sqrt();
    let (node1, node2) = (0.5 - sqrt3 / 6.0, 0.5 + sqrt3 / 6.0);
    let (w1, w2) = (0.25 - sqrt3 / 6.0, 0.25 + sqrt3 / 6.0);
    let dt = protocol.tau / steps as f64;

    let mut u = Matrix4::<C64>::identity();
    for n in 0..steps {
        let t = n as f64 * dt;
        let b1 = protocol.field_at(t + node1 * dt);
        let b2 = protocol.field_at(t + node2 * dt);
        // H is affine in B with unit weight on the coupling, and w1 + w2 = 1/2.
        let early = 2.0 * (w2 * b1 + w1 * b2);
        let late = 2.0 * (w1 * b1 + w2 * b2);
        u = hamiltonian_exponential(late, base, 0.5 * dt)
            * hamiltonian_exponential(early, base, 0.5 * dt)
            * u;
    }
    Ok(Propagator {
        u: to_operator(&u),
        protocol: *protocol,
        steps,
    })
}

/// V(τ) for the compression stroke, H^com(t) = H^exp(τ − t).
///
/// Checks V against the expansion propagator U of the mirrored ramp. For a real
/// symmetric Hamiltonian family reversing the time order transposes the product, so the
/// identity that holds is V = Uᵀ; the transition probabilities between real eigenstates
/// are therefore identical for U and V.
pub fn compression_propagator(
    protocol: &FieldProtocol,
    base: &SpinParams,
    steps: usize,
) -> Result<Propagator> {
    if protocol.direction != Direction::Compression {
        return Err(Error::InvalidProtocol("compression propagator needs a compression ramp".into()));
    }
    let v = propagate_unitary(protocol, base, steps)?;
    let u = propagate_unitary(&protocol.mirrored(), base, steps)?;
    let defect = v.u.max_abs_diff(&u.u.transpose());
    if defect > 1e-10 {
        return Err(Error::MicroreversibilityViolation(format!(
            "‖V − Uᵀ‖ = {defect:e}"
        )));
    }
    Ok(v)
}

/// Expansion and compression propagators of one cycle, built once.
///
/// V is obtained as Uᵀ, the identity verified by [`compression_propagator`].
pub fn stroke_pair(
    b_low: f64,
    b_high: f64,
    tau: f64,
    base: &SpinParams,
    steps: usize,
) -> Result<(Propagator, Propagator)> {
    let expansion = FieldProtocol::expansion(b_low, b_high, tau)?;
    let u = propagate_unitary(&expansion, base, steps)?;
    let v = Propagator {
        u: u.u.transpose(),
        protocol: expansion.mirrored(),
        steps,
    };
    Ok((u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::build_hamiltonian;

    fn ising() -> SpinParams {
        SpinParams::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn closed_form_step_matches_spectral_exponential() {
        let p = SpinParams::new(2.3, 1.0, 0.6).unwrap();
        let h = build_hamiltonian(&p);
        let (e, v) = h.eigh();
        let s = 0.37;
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            4,
            e.iter().map(|x| C64::from_polar(1.0, -x * s)),
        ));
        let reference = Operator::from_matrix(&v * diag * v.adjoint()).unwrap();
        let closed = to_operator(&hamiltonian_exponential(p.b, &p, s));
        assert!(closed.max_abs_diff(&reference) < 1e-12);
    }

    #[test]
    fn sudden_limit_is_identity() {
        let prot = FieldProtocol::expansion(1.0, 4.0, 1e-8).unwrap();
        let u = propagate_unitary(&prot, &ising(), DEFAULT_STEPS).unwrap();
        assert!(u.u.max_abs_diff(&Operator::identity(4)) < 1e-6);
    }

    #[test]
    fn short_ramp_near_identity_without_shortcut() {
        let prot = FieldProtocol::expansion(1.0, 4.0, 1e-5).unwrap();
        let u = propagate_unitary(&prot, &ising(), 64).unwrap();
        assert!(u.u.max_abs_diff(&Operator::identity(4)) < 1e-3);
        assert!(u.u.is_unitary(1e-12));
    }

    #[test]
    fn too_few_steps_rejected() {
        let prot = FieldProtocol::expansion(1.0, 4.0, 1.0).unwrap();
        assert_eq!(
            propagate_unitary(&prot, &ising(), 15).unwrap_err(),
            Error::StepsTooFew { steps: 15, min: 16 }
        );
    }

    #[test]
    fn protocol_validation() {
        assert!(FieldProtocol::expansion(4.0, 1.0, 1.0).is_err());
        assert!(FieldProtocol::expansion(1.0, 4.0, 0.0).is_err());
        assert!(FieldProtocol::expansion(1.0, 4.0, f64::INFINITY).is_err());
        let c = FieldProtocol::compression(1.0, 4.0, 2.0).unwrap();
        assert_eq!(c.b_start, 4.0);
        assert_eq!(c.field_at(2.0), 1.0);
        let e = c.mirrored();
        // B_com(t) = B_exp(τ − t)
        assert!((c.field_at(0.5) - e.field_at(1.5)).abs() < 1e-15);
    }

    #[test]
    fn compression_requires_compression_direction() {
        let e = FieldProtocol::expansion(1.0, 4.0, 1.0).unwrap();
        assert!(compression_propagator(&e, &ising(), 64).is_err());
    }

    #[test]
    fn commuting_family_gives_diagonal_sector_propagator() {
        let p = SpinParams::new(1.0, 1.0, 0.0).unwrap();
        let c = FieldProtocol::compression(1.0, 4.0, 3.0).unwrap();
        let v = compression_propagator(&c, &p, 200).unwrap();
        // |00⟩ and |11⟩ are eigenstates of every H(t) when γ = 0
        assert_eq!(v.u.get(0, 3).norm(), 0.0);
        assert_eq!(v.u.get(3, 0).norm(), 0.0);
    }

    #[test]
    fn stroke_pair_compression_equals_direct_construction() {
        let p = SpinParams::new(1.0, 1.0, 0.8).unwrap();
        let (_, v) = stroke_pair(1.0, 4.0, 1.3, &p, 400).unwrap();
        let direct = propagate_unitary(&FieldProtocol::compression(1.0, 4.0, 1.3).unwrap(), &p, 400).unwrap();
        assert!(v.u.max_abs_diff(&direct.u) < 1e-12);
    }
}
