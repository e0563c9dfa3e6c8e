use thiserror::Error;

/// Errors raised by constructors, estimators and the study harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the admissible range of its family.
    #[error("invalid parameter for {family}: {reason}")]
    InvalidParameter { family: &'static str, reason: String },

    /// A checkerboard mass matrix is not doubly stochastic.
    #[error("checkerboard matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    /// A knot list does not define a Pickands dependence function.
    #[error("invalid Pickands function: {invariant} violated ({detail})")]
    InvalidPickands {
        invariant: &'static str,
        detail: String,
    },

    /// A tabulated generator is not usable.
    #[error("invalid generator table: {0}")]
    InvalidGenerator(String),

    /// Input observations are unusable.
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// Direct and D2-based evaluations of r disagree.
    #[error("r identity mismatch: direct {direct} vs 6*D2^2 {via_d2} (tolerance {tolerance})")]
    IdentityMismatch {
        direct: f64,
        via_d2: f64,
        tolerance: f64,
    },

    /// A family specification string could not be parsed.
    #[error("unknown or malformed family specification `{0}`")]
    UnknownFamily(String),

    /// Study configuration violates its invariants.
    #[error("invalid study configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error stems from user-supplied input rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_) | Error::IdentityMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
