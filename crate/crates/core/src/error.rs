use thiserror::Error;

/// Errors raised by the counting, bound and harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite (leading minor {index} is {value})")]
    NotPositiveDefinite { index: usize, value: String },
    #[error("unsupported dimension {0}; only 2 and 3 are supported")]
    BadDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("negative input where a nonnegative value is required")]
    NegativeInput,
    #[error("nonpositive input where a positive value is required")]
    NonpositiveInput,
    #[error("dilation parameter t must be positive, got {0}")]
    NonpositiveT(f64),
    #[error("support value g must be positive, got {0}")]
    NonpositiveG(f64),
    #[error("integral of u^{exponent} diverges at infinity")]
    DivergentIntegral { exponent: f64 },
    #[error("integration range is reversed: [{lower}, {upper}]")]
    BadRange { lower: f64, upper: f64 },
    #[error("cutoff K = {k} does not exceed G0 = {g0}")]
    InfeasibleRange { k: f64, g0: f64 },
    #[error("invalid profile invariants: {0}")]
    InvalidInvariants(String),
    #[error("profile argument {0} lies outside [-1, 1]")]
    ProfileDomain(String),
    #[error("spheroid ratio must lie in (0, 1], got {0}")]
    BadAlpha(String),
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error("z = {0} is too close to a pole for the direct parametrization")]
    PoleProximity(f64),
    #[error("profile curvature degenerates near z = {0}")]
    DegenerateCurvature(f64),
    #[error("theorem {theorem} cannot be applied to a {kind} domain")]
    IncompatibleTheorem { theorem: String, kind: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
