//! Otto-cycle bookkeeping: numeric four-stroke runs, closed forms and the local-spin view.

pub mod closed_form;
pub mod config;
pub mod cycle;
pub mod local;

pub use closed_form::{
    finite_time_closed_form, irreversible_work, irreversible_work_from_xi, quasistatic_closed_form,
    single_spin_otto_eff, ClosedFormCycle, ThermalCoefficients,
};
pub use config::CycleConfig;
pub use cycle::{
    adiabatic_map, classify, classify_machine, cycle_corners, run_cycle_numeric,
    thermalization_profile, thermalization_time, CycleCorners, CycleResult, MachineRegime,
    ThermalizationSample,
};
pub use local::{
    local_energy, local_finite_time, local_quasistatic, local_quasistatic_eff, work_gap,
    LocalCycleResult,
};
