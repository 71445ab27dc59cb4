use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),

    #[error("temperature {t} K is below the dead-state temperature {t0} K")]
    BelowDeadState { t: f64, t0: f64 },

    #[error("{species} polynomial is undefined at {t} K (valid {lo}..{hi} K)")]
    OutOfRange {
        species: &'static str,
        t: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid reference state: {0}")]
    InvalidReference(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("table: {0}")]
    Table(#[from] TableError),

    #[error("thermo data line {line}: {reason}")]
    ThermoData { line: usize, reason: String },

    #[error("unknown ledger term `{0}`")]
    UnknownTerm(String),

    #[error("battery power {demand:.1} W exceeds the pack maximum {max:.1} W")]
    PowerLimit { demand: f64, max: f64 },

    #[error("state of charge left [0, 1]: {0}")]
    SocOutOfBounds(f64),

    #[error("MTPA solve for {torque} Nm did not converge")]
    NoConvergence { torque: f64 },

    #[error("no feasible torque split for a wheel force of {force:.1} N")]
    NoFeasibleSplit { force: f64 },

    #[error("calibration: {0}")]
    Calibration(String),

    #[error("fuel consumed ({used:.3} kg) exceeds the tank content ({capacity:.3} kg)")]
    FuelExhausted { used: f64, capacity: f64 },

    #[error("drive cycle: {0}")]
    Cycle(String),

    #[error("step {step} (t = {time} s): {source}")]
    AtStep {
        step: usize,
        time: f64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("table is empty")]
    Empty,
    #[error("breakpoints must be strictly increasing (index {index})")]
    NotIncreasing { index: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("row {row} has {found} values, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
}
