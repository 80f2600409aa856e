use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{build_hamiltonian, pauli_x, spectrum, DensityMatrix, Operator, SpinParams};

/// Step used when a config does not fix one, in units of 1/J.
pub const BASE_DT: f64 = 1e-3;
/// Trace and positivity tolerance applied to every returned sample.
pub const SAMPLE_TOL: f64 = 1e-8;
/// Below this |ω₂| the second channel has no well-defined bath occupation.
pub const FREQUENCY_GUARD: f64 = 1e-12;

type Super = SMatrix<C64, 16, 16>;
type VecRho = SVector<C64, 16>;

/// One dissipative channel: lowering operator X with [H, X] = −ωX.
#[derive(Clone, Debug)]
pub struct JumpOperator {
    pub op: Operator,
    pub omega: f64,
}

/// The two bath channels of a σˣ coupling on spin 1.
///
/// X₁ = ½[(c−d)|ψ₁⟩⟨ψ₃| + (a+b)|ψ₀⟩⟨ψ₂|] at ω₁ = 2k + 2J and
/// X₂ = ½[(c+d)|ψ₂⟩⟨ψ₃| + (a−b)|ψ₀⟩⟨ψ₁|] at ω₂ = 2k − 2J.
///
/// When k < J, ω₂ is negative and X₂ raises the energy; [`evolve_lindblad`] then treats
/// X₂† as the lowering channel at |ω₂|.
pub fn jump_operators(p: &SpinParams) -> Result<[JumpOperator; 2]> {
    let s = spectrum(p)?;
    let omega1 = 2.0 * s.k + 2.0 * p.j;
    let omega2 = 2.0 * s.k - 2.0 * p.j;
    if omega2.abs() < FREQUENCY_GUARD {
        return Err(Error::DegenerateSpectrum(format!(
            "ω₂ = 2k − 2J vanishes at B = {}, γ = {}",
            p.b, p.gamma
        )));
    }
    let co = s.coefficients;
    let half = |x: f64| C64::new(0.5 * x, 0.0);
    let ket = |i| s.state(i);
    let x1 = &Operator::outer(ket(1), ket(3)).scale(half(co.c - co.d))
        + &Operator::outer(ket(0), ket(2)).scale(half(co.a + co.b));
    let x2 = &Operator::outer(ket(2), ket(3)).scale(half(co.c + co.d))
        + &Operator::outer(ket(0), ket(1)).scale(half(co.a - co.b));
    Ok([
        JumpOperator { op: x1, omega: omega1 },
        JumpOperator { op: x2, omega: omega2 },
    ])
}

/// σ₁ˣ ⊗ 𝟙, the bath coupling operator the channels are cut from.
pub fn bath_coupling() -> Operator {
    pauli_x().kron(&Operator::identity(2))
}

/// Bose occupation 1/(e^{ω/T} − 1).
pub fn bose_occupation(omega: f64, temperature: f64) -> f64 {
    1.0 / (omega / temperature).exp_m1()
}

/// One isochoric bath contact at fixed field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipativeConfig {
    pub bath_temperature: f64,
    #[serde(rename = "Gamma")]
    pub gamma_rate: f64,
    pub duration: f64,
    /// RK4 steps spanning `duration`.
    pub steps: usize,
    pub fixed_params: SpinParams,
}

impl DissipativeConfig {
    /// Chooses the step count from [`default_dt`].
    pub fn new(params: SpinParams, bath_temperature: f64, gamma_rate: f64, duration: f64) -> Result<Self> {
        Self::with_step(params, bath_temperature, gamma_rate, duration, default_dt(gamma_rate))
    }

    /// Step count `ceil(duration / dt)`, so the realised step never exceeds `dt`.
    pub fn with_step(
        params: SpinParams,
        bath_temperature: f64,
        gamma_rate: f64,
        duration: f64,
        dt: f64,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidDissipation(format!("step must be > 0, got {dt}")));
        }
        let steps = if duration > 0.0 {
            ((duration / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
        } else {
            0
        };
        let cfg = DissipativeConfig {
            bath_temperature,
            gamma_rate,
            duration,
            steps,
            fixed_params: params,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.fixed_params.validate()?;
        if !(self.bath_temperature > 0.0) {
            return Err(Error::NonPositiveTemperature(self.bath_temperature));
        }
        if !(self.gamma_rate > 0.0 && self.gamma_rate.is_finite()) {
            return Err(Error::InvalidDissipation(format!("Gamma must be > 0, got {}", self.gamma_rate)));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(Error::InvalidDissipation(format!(
                "duration must be finite and >= 0, got {}",
                self.duration
            )));
        }
        if self.duration > 0.0 && self.steps == 0 {
            return Err(Error::InvalidDissipation("positive duration needs steps > 0".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.duration / self.steps as f64
        }
    }
}

/// 1e-3 at the reference rate Γ = 0.1, shrinking in proportion for stronger coupling.
pub fn default_dt(gamma_rate: f64) -> f64 {
    BASE_DT * (0.1 / gamma_rate).min(1.0)
}

fn to_static(op: &Operator) -> SMatrix<C64, 4, 4> {
    SMatrix::<C64, 4, 4>::from_fn(|r, c| op.get(r, c))
}

/// Column-stacked generator: vec(AρB) = (Bᵀ ⊗ A) vec(ρ).
fn generator(cfg: &DissipativeConfig) -> Result<Super> {
    let h = to_static(&build_hamiltonian(&cfg.fixed_params));
    let id = SMatrix::<C64, 4, 4>::identity();
    let i = C64::new(0.0, 1.0);
    let mut l: Super = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);

    let mut dissipator = |x: SMatrix<C64, 4, 4>, rate: f64| {
        let xdx = x.adjoint() * x;
        let d = x.conjugate().kronecker(&x)
            - id.kronecker(&xdx) * C64::new(0.5, 0.0)
            - xdx.transpose().kronecker(&id) * C64::new(0.5, 0.0);
        l += d * C64::new(rate, 0.0);
    };
    for jump in jump_operators(&cfg.fixed_params)? {
        // a raising channel at negative ω is a lowering channel at |ω| for the adjoint
        let (x, omega) = if jump.omega > 0.0 {
            (to_static(&jump.op), jump.omega)
        } else {
            (to_static(&jump.op.adjoint()), -jump.omega)
        };
        let n = bose_occupation(omega, cfg.bath_temperature);
        dissipator(x, cfg.gamma_rate * (n + 1.0));
        dissipator(x.adjoint(), cfg.gamma_rate * n);
    }
    Ok(l)
}

/// Lindblad generator 𝓛 acting on column-stacked ρ, as a dense 16×16 matrix.
pub fn liouvillian(cfg: &DissipativeConfig) -> Result<DMatrix<C64>> {
    let l = generator(cfg)?;
    Ok(DMatrix::from_fn(16, 16, |r, c| l[(r, c)]))
}

/// One classical RK4 step for the linear ODE ρ' = 𝓛ρ, written as a matrix.
fn rk4_step(l: &Super, h: f64) -> Super {
    let hl = l * C64::new(h, 0.0);
    let mut term = Super::identity();
    let mut sum = Super::identity();
    for n in 1..=4 {
        term = term * hl * C64::new(1.0 / n as f64, 0.0);
        sum += &term;
    }
    sum
}

/// P^n by binary powering; identical to stepping n times up to rounding.
fn power(p: &Super, mut n: usize) -> Super {
    let mut result = Super::identity();
    let mut base = *p;
    while n > 0 {
        if n & 1 == 1 {
            result = base * result;
        }
        n >>= 1;
        if n > 0 {
            base = base * base;
        }
    }
    result
}

fn vectorize(rho: &DensityMatrix) -> VecRho {
    let m = rho.matrix();
    VecRho::from_fn(|i, _| m[(i % 4, i / 4)])
}

fn unvectorize(v: &VecRho) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |r, c| v[r + 4 * c])
}

fn sample(v: &VecRho, time: f64) -> Result<DensityMatrix> {
    let m = unvectorize(v);
    let herm = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    let op = Operator::from_matrix(herm)?;
    let min = op.eigenvalues_hermitian()[0];
    if min < -SAMPLE_TOL {
        return Err(Error::StepSizeTooLarge {
            time,
            min_eigenvalue: min,
        });
    }
    DensityMatrix::with_tolerance(op, 1e-10, SAMPLE_TOL, SAMPLE_TOL)
}

/// Integrates the master equation at fixed field from `rho0`.
///
/// Returns `(t, ρ(t))` for each requested time, in ascending order. Times are snapped to
/// the RK4 grid of `cfg`; the reported `t` is the grid time actually reached. Requested
/// times must lie in `[0, cfg.duration]`.
pub fn evolve_lindblad(
    rho0: &DensityMatrix,
    cfg: &DissipativeConfig,
    sample_times: &[f64],
) -> Result<Vec<(f64, DensityMatrix)>> {
    cfg.validate()?;
    if rho0.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho0.dim(),
        });
    }
    let mut times = sample_times.to_vec();
    if let Some(bad) = times
        .iter()
        .find(|t| !(**t >= 0.0 && **t <= cfg.duration * (1.0 + 1e-12)))
    {
        return Err(Error::InvalidDissipation(format!(
            "sample time {bad} outside [0, {}]",
            cfg.duration
        )));
    }
    times.sort_by(f64::total_cmp);

    let h = cfg.step();
    let step = if cfg.steps > 0 {
        rk4_step(&generator(cfg)?, h)
    } else {
        Super::identity()
    };

    let mut v = vectorize(rho0);
    let mut at = 0usize;
    let mut out = Vec::with_capacity(times.len());
    for t in times {
        let target = if h > 0.0 {
            ((t / h).round() as usize).min(cfg.steps)
        } else {
            0
        };
        if target > at {
            v = power(&step, target - at) * v;
            at = target;
        }
        let now = at as f64 * h;
        out.push((now, sample(&v, now)?));
    }
    Ok(out)
}

/// State at the end of the bath contact.
pub fn relax(rho0: &DensityMatrix, cfg: &DissipativeConfig) -> Result<DensityMatrix> {
    let mut traj = evolve_lindblad(rho0, cfg, &[cfg.duration])?;
    Ok(traj.pop().expect("one sample requested").1)
}

/// Applies 𝓛 to ρ directly in operator form.
pub fn apply_generator(rho: &Operator, cfg: &DissipativeConfig) -> Result<Operator> {
    let l = generator(cfg)?;
    let m = rho.matrix();
    let v = VecRho::from_fn(|i, _| m[(i % 4, i / 4)]);
    let out = l * v;
    Operator::from_matrix(DMatrix::from_fn(4, 4, |r, c| out[r + 4 * c]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{gibbs_state, trace_distance};

    fn cfg(b: f64, gamma: f64, duration: f64) -> DissipativeConfig {
        DissipativeConfig::new(SpinParams::new(b, 1.0, gamma).unwrap(), 10.0, 0.1, duration).unwrap()
    }

    #[test]
    fn ising_frequencies() {
        let [x1, x2] = jump_operators(&SpinParams::new(4.0, 1.0, 1.0).unwrap()).unwrap();
        let r17 = 17.0f64.sqrt();
        assert!((x1.omega - (2.0 * r17 + 2.0)).abs() < 1e-12);
        assert!((x2.omega - (2.0 * r17 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn channels_are_eigenprojections_of_bath_coupling() {
        // independent construction: Pᵢ σ₁ˣ Pⱼ
        let p = SpinParams::new(2.7, 1.0, 0.4).unwrap();
        let s = spectrum(&p).unwrap();
        let sx = bath_coupling();
        let proj = |i: usize, j: usize| &(&s.projector(i) * &sx) * &s.projector(j);
        let [x1, x2] = jump_operators(&p).unwrap();
        let x1_ref = &proj(1, 3) + &proj(0, 2);
        let x2_ref = &proj(2, 3) + &proj(0, 1);
        assert!(x1.op.max_abs_diff(&x1_ref) < 1e-12);
        assert!(x2.op.max_abs_diff(&x2_ref) < 1e-12);
        // together with their adjoints they rebuild σ₁ˣ
        let total = &(&x1.op + &x1.op.adjoint()) + &(&x2.op + &x2.op.adjoint());
        assert!(total.max_abs_diff(&sx) < 1e-12);
    }

    #[test]
    fn degenerate_second_channel_refused() {
        let p = SpinParams::new(1.0, 1.0, 0.0).unwrap();
        assert!(matches!(jump_operators(&p), Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn negative_second_frequency_is_still_a_ladder() {
        let p = SpinParams::new(0.3, 1.0, 0.2).unwrap();
        let h = build_hamiltonian(&p);
        let [_, x2] = jump_operators(&p).unwrap();
        assert!(x2.omega < 0.0);
        let comm = h.commutator(&x2.op);
        assert!(comm.max_abs_diff(&x2.op.scale(C64::new(-x2.omega, 0.0))) < 1e-10);
    }

    #[test]
    fn gibbs_state_is_stationary() {
        let c = cfg(4.0, 0.7, 20.0);
        let g = gibbs_state(&build_hamiltonian(&c.fixed_params), 10.0).unwrap().state;
        let lg = apply_generator(g.operator(), &c).unwrap();
        assert!(lg.max_abs() < 1e-13);
        let traj = evolve_lindblad(&g, &c, &[5.0, 20.0]).unwrap();
        for (_, rho) in traj {
            assert!(trace_distance(&rho, &g).unwrap() < 1e-8);
        }
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity() {
        let c = cfg(2.0, 0.5, 1.0);
        let rho = DensityMatrix::pure(&crate::qcore::basis_ket(1, 1)).unwrap();
        let l = apply_generator(rho.operator(), &c).unwrap();
        assert!(l.trace().norm() < 1e-13);
        assert!(l.is_hermitian(1e-13));
    }

    #[test]
    fn samples_sorted_and_snapped() {
        let c = cfg(4.0, 1.0, 2.0);
        let rho = DensityMatrix::maximally_mixed(4);
        let traj = evolve_lindblad(&rho, &c, &[1.5, 0.0, 0.25]).unwrap();
        let ts: Vec<f64> = traj.iter().map(|(t, _)| *t).collect();
        assert_eq!(ts.len(), 3);
        assert!(ts[0] == 0.0 && (ts[1] - 0.25).abs() < 1e-12 && (ts[2] - 1.5).abs() < 1e-12);
        assert!(evolve_lindblad(&rho, &c, &[3.0]).is_err());
    }

    #[test]
    fn zero_duration_returns_initial_state() {
        let c = cfg(4.0, 1.0, 0.0);
        let rho = DensityMatrix::pure(&crate::qcore::basis_ket(0, 1)).unwrap();
        let out = relax(&rho, &c).unwrap();
        assert!(out.operator().max_abs_diff(rho.operator()) < 1e-15);
    }

    #[test]
    fn config_validation() {
        let p = SpinParams::new(4.0, 1.0, 1.0).unwrap();
        assert!(DissipativeConfig::new(p, 0.0, 0.1, 1.0).is_err());
        assert!(DissipativeConfig::new(p, 1.0, 0.0, 1.0).is_err());
        assert!(DissipativeConfig::new(p, 1.0, 0.1, -1.0).is_err());
        assert!((default_dt(1.0) - 1e-4).abs() < 1e-18);
    }
}
