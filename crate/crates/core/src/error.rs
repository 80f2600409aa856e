use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid field protocol: {0}")]
    InvalidProtocol(String),

    #[error("integrator needs at least {min} steps, got {steps}")]
    StepsTooFew { steps: usize, min: usize },

    #[error("positivity lost at t = {time}: min eigenvalue {min_eigenvalue:e}; shrink the step size")]
    StepSizeTooLarge { time: f64, min_eigenvalue: f64 },

    #[error("microreversibility violated: {0}")]
    MicroreversibilityViolation(String),

    #[error("invalid dissipative configuration: {0}")]
    InvalidDissipation(String),

    #[error("invalid cycle configuration: {0}")]
    InvalidConfig(String),

    #[error("final state differs from the cycle start by trace distance {0:e}")]
    NonCyclicState(f64),

    #[error("independent evaluations disagree: {0}")]
    CrossCheck(String),

    #[error("heat input vanishes, efficiency undefined")]
    ZeroHeat,

    #[error("total cycle duration is zero")]
    ZeroDuration,

    #[error("fields must satisfy 0 < B_L < B_H, got B_L = {low}, B_H = {high}")]
    InvalidFields { low: f64, high: f64 },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("invalid override '{0}'")]
    InvalidOverride(String),

    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
