use alloc::string::String;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid point: {0}")]
    InvalidPoint(&'static str),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("dimension of H^0(CP^{m}, O({degree})) overflows or exceeds the cap")]
    DimensionOverflow { m: usize, degree: usize },
    #[error("lattice grids exist only for m = 1 (got m = {0})")]
    LatticeUnsupported(usize),
    #[error("covering grid needs {needed} nodes, cap is {cap}")]
    InfeasibleGrid { needed: u128, cap: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("basis normalization failed validation: {0}")]
    NormalizationMismatch(String),
    #[error("section is not unit norm (|c| = {0})")]
    NotUnitNorm(f64),
    #[error("chart radius {radius} exceeds the allowed {max}")]
    ChartRadius { radius: f64, max: f64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(&'static str),
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),
    #[error("out of domain: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),
    #[error("at least {min} trials required, got {got}")]
    TooFewTrials { min: u64, got: u64 },
    #[error("incomplete parameters: {0}")]
    IncompleteParams(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
