use thiserror::Error;

/// Errors produced by the detection-error toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("detector model for qubit {qubit} is singular: |p0 + p1 - 1| = {gap:e}")]
    SingularModel { qubit: usize, gap: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("invalid probability {value} for {what}")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("no calibration data covers {rate} on qubit {qubit}")]
    NoData { qubit: usize, rate: &'static str },

    #[error("counts record is empty")]
    EmptyCounts,

    #[error("measurement setting `{setting}` does not match observable `{observable}`")]
    SettingMismatch { setting: String, observable: String },

    #[error("invalid graph coloring: vertices {0} and {1} are adjacent and share a color")]
    InvalidColoring(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("no counts supplied for the setting of color class {0}")]
    MissingSetting(usize),

    #[error("mean spin <J_x> = {0:e} is too small to normalise the squeezing parameter")]
    DegenerateMeanSpin(f64),

    #[error("{what} with {n} qubits exceeds the supported limit of {limit}")]
    ResourceLimit { what: &'static str, n: usize, limit: usize },

    #[error("closed-form correction needs uniform symmetric rates p0 = p1 on every qubit")]
    NonUniformModel,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
