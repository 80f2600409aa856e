//! Exact linear algebra for the two-spin working medium.

pub mod hamiltonian;
pub mod operator;
pub mod spectrum;
pub mod state;

pub use hamiltonian::{build_hamiltonian, local_hamiltonian, SpinParams};
pub use operator::{basis_ket, pauli_x, pauli_y, pauli_z, Operator};
pub use spectrum::{analytic_spectrum, numeric_spectrum, spectrum, OverlapCoefficients, Spectrum};
pub use state::{
    gibbs_state, internal_energy, partial_trace, trace_distance, DensityMatrix, Spin, ThermalState,
};
