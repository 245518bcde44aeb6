use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis is singular")]
    Singular,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("LLL parameter delta must lie in (1/4, 1], got {0}")]
    InvalidDelta(String),

    #[error("lattice dimension {dim} exceeds the enumeration cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("vector is not in the lattice")]
    NotInLattice,

    #[error("basis is not in Hermite normal form")]
    NotHnf,

    #[error("gcd {gcd} of the targets does not divide {goal}")]
    NotDivisible { gcd: String, goal: String },

    #[error("Hilbert space of {dim} states exceeds the cap of {cap}")]
    HilbertCap { dim: String, cap: usize },

    #[error("time {t} lies outside the sweep interval [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("norm drift {drift:e} exceeds tolerance {tolerance:e}")]
    NormDrift { drift: f64, tolerance: f64 },

    #[error("state vector is not normalised (norm {0})")]
    NotNormalised(f64),

    #[error("problem spectrum is identically zero")]
    ZeroSpectrum,

    #[error("matrix is not symmetric")]
    Asymmetric,

    #[error("empty input")]
    EmptyInput,

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
