//! Quantum Otto cycle with a two-spin anisotropic XY working medium.
//!
//! Units: ħ = k_B = 1, energies and times in units of the coupling J.

pub mod error;
pub mod dynamics;
pub mod qcore;
pub mod thermo;
pub mod cli;

pub use error::{Error, Result};
