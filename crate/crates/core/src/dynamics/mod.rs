//! Unitary field ramps, bath contacts and the transition probabilities between them.

pub mod lindblad;
pub mod propagator;
pub mod transitions;

pub use lindblad::{
    bath_coupling, bose_occupation, default_dt, evolve_lindblad, jump_operators, liouvillian,
    relax, DissipativeConfig, JumpOperator,
};
pub use propagator::{
    compression_propagator, propagate_unitary, stroke_pair, Direction, FieldProtocol, Propagator,
    DEFAULT_STEPS, MIN_STEPS,
};
pub use transitions::{
    adiabatic_delta, adiabatic_lambda, interference_decomposition, microreversibility,
    transition_lambda_delta, transition_probabilities, transition_xi, Interference,
    MicroreversibilityReport, TransitionProbabilities,
};
