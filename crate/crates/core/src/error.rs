//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("matrix is not unitary (defect {defect:.3e} > {tol:.3e})")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("rotation generator does not square to the identity (defect {0:.3e})")]
    NotInvolution(f64),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("gate label {0} is outside the expandable native set")]
    NotExpandable(String),

    #[error("Kraus set is not trace preserving (defect {defect:.3e} > {tol:.3e})")]
    NotCptp { defect: f64, tol: f64 },

    #[error("quantum state is not physical: {0}")]
    UnphysicalState(String),

    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),

    #[error("invalid coupling graph: {0}")]
    InvalidGraph(String),

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error("counts validation failed: {0}")]
    InvalidCounts(String),

    #[error("setting has zero trials; marginals are undefined")]
    DegenerateCounts,

    #[error("zero variance: counts are deterministic, no error estimate exists")]
    ZeroVariance,

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unrecognized schema {found:?}, expected {expected:?}")]
    SchemaMismatch { expected: String, found: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
