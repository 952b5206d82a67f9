use thiserror::Error;

/// Errors raised by the checks in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NaN is not a valid extended real")]
    NotANumber,
    #[error("dual generator {index} is the zero vector")]
    ZeroGenerator { index: usize },
    #[error("interior point is not interior: generator {index} gives g·e = {value}")]
    InteriorWitnessInvalid { index: usize, value: f64 },
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("operation requires a nonempty set")]
    EmptySet,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("bad generator parameters: {0}")]
    BadParameters(String),
    #[error("the sample domain is empty")]
    EmptyDomain,
    #[error("point {0:?} is not a sample of the tabulated domain")]
    OutsideSampleDomain(Vec<f64>),
    #[error("base point {0:?} is not in dom F")]
    BasePointOutsideDomain(Vec<f64>),
    #[error("value at {0:?} is not a singleton")]
    NonSingletonValue(Vec<f64>),
    #[error("path grid too coarse: {0} points, need at least 3")]
    GridTooCoarse(usize),
    #[error("no probe point available at t = {t} in direction {direction}")]
    StepOutsideDomain { t: f64, direction: i8 },
    #[error("no mean-value witness found (grid too coarse or path not l.s.c.)")]
    NoWitnessFound,
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
