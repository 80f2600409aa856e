//! Reference solvers that share no code path with the library integrators.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use spin_otto::qcore::{build_hamiltonian, SpinParams};

/// H(B) assembled from the library builder (the Hamiltonian itself is not under test here).
fn ham(p: &SpinParams, b: f64) -> DMatrix<C64> {
    build_hamiltonian(&p.with_field(b)).into_matrix()
}

fn rhs(p: &SpinParams, field: &dyn Fn(f64) -> f64, t: f64, psi: &DVector<C64>) -> DVector<C64> {
    ham(p, field(t)) * psi * C64::new(0.0, -1.0)
}

/// Adaptive Dormand–Prince 5(4) solution of i dψ/dt = H(B(t))ψ on [0, tau].
pub fn schrodinger_dp45(
    p: &SpinParams,
    field: &dyn Fn(f64) -> f64,
    tau: f64,
    psi0: &DVector<C64>,
    tol: f64,
) -> DVector<C64> {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut t = 0.0;
    let mut h = (tau / 100.0).min(1e-3);
    let mut psi = psi0.clone();
    while t < tau {
        if t + h > tau {
            h = tau - t;
        }
        let mut k: Vec<DVector<C64>> = Vec::with_capacity(7);
        for s in 0..7 {
            let mut y = psi.clone();
            for (j, kj) in k.iter().enumerate() {
                y += kj * C64::new(h * A[s][j], 0.0);
            }
            k.push(rhs(p, field, t + C[s] * h, &y));
        }
        let mut y5 = psi.clone();
        let mut err = DVector::<C64>::zeros(psi.len());
        for s in 0..7 {
            y5 += &k[s] * C64::new(h * B5[s], 0.0);
            err += &k[s] * C64::new(h * (B5[s] - B4[s]), 0.0);
        }
        let e = err.camax();
        if e <= tol {
            t += h;
            psi = y5;
        }
        let factor = if e == 0.0 { 5.0 } else { 0.9 * (tol / e).powf(0.2) };
        h *= factor.clamp(0.2, 5.0);
    }
    psi
}

/// exp(M) by Taylor series with scaling and squaring.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    let norm: f64 = m.iter().map(|z| z.norm()).sum();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = m * C64::new(scale, 0.0);
    let n = m.nrows();
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &a * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn ramp(b_start: f64, b_end: f64, tau: f64) -> impl Fn(f64) -> f64 {
    move |t| b_start + (b_end - b_start) * t / tau
}
