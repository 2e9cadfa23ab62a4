//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced while validating data, fitting models, or building curves.
#[derive(Debug, Error)]
pub enum NlhError {
    #[error("sample contains no subjects")]
    EmptySample,
    #[error("subject {index}: exit time must exceed entry time (entry {entry}, exit {exit})")]
    InvalidSubjectTimes { index: usize, entry: f64, exit: f64 },
    #[error("subject {index}: covariate length {got} does not match sample dimension {expected}")]
    CovariateDimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("observation window must be positive")]
    InvalidWindowEnd,
    #[error("sample has no events; hazard comparison curves are undefined")]
    NoEvents,
    #[error("time argument must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("cut points must be strictly increasing and cover the observation window")]
    InvalidCutPoints,
    #[error("event time {time} lies beyond the last cut point {last}")]
    EventBeyondCuts { time: f64, last: f64 },
    #[error("parameter vector has wrong length (expected {expected}, got {got})")]
    ParamLength { expected: usize, got: usize },
    #[error("parameters outside the admissible region of model `{model}`")]
    InadmissibleParams { model: String },
    #[error("model `{model}`: {what}")]
    ModelDomain { model: String, what: String },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("information matrix is singular or not positive definite")]
    SingularInformation,
    #[error("window [{a}, {b}] is invalid or contains no events")]
    InvalidWindow { a: f64, b: f64 },
    #[error("band fractions must satisfy 0 < b1 < b2 < 1 (got {b1}, {b2})")]
    InvalidBandFractions { b1: f64, b2: f64 },
    #[error("discrete table is invalid: {0}")]
    InvalidTable(String),
    #[error("discrete hazard left (0,1) on interval {interval}")]
    DiscreteHazardOutOfRange { interval: usize },
    #[error("sample has covariates of dimension 0; regression model needs at least one")]
    MissingCovariates,
    #[error("simulation scenario is invalid: {0}")]
    InvalidScenario(String),
    #[error("curve overlay list is empty")]
    EmptyOverlay,
    #[error("{0}")]
    Parse(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, NlhError>;
