use thiserror::Error;

/// Errors produced by the lab.
///
/// Variants split into two families: domain errors (the mathematics refused
/// the input, e.g. a generator that is not outer) and format errors (the
/// bytes on disk were wrong). [`LabError::is_domain`] tells them apart.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid grid size {0}: must be a power of two and at least {1}")]
    InvalidGrid(usize, usize),
    #[error("signal has {got} samples but the grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at node {0}")]
    NonFinite(usize),
    #[error("region contains no grid nodes")]
    EmptyRegion,
    #[error("boundary data is not of Hardy class at this resolution: negative-frequency energy fraction {leak:.3e} exceeds {tol:.3e}")]
    NotAnalytic { leak: f64, tol: f64 },
    #[error("point {0} is too close to the unit circle")]
    PointOnBoundary(num_complex::Complex64),
    #[error("log-modulus is not reliably integrable: {clipped} of {total} nodes hit the clip floor")]
    UnboundedLogData { clipped: usize, total: usize },
    #[error("function vanishes identically on the grid")]
    ZeroFunction,
    #[error("singular inner function evaluated at its singular point")]
    SingularPoint,
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("generator is not outer: {0}")]
    NotOuter(String),
    #[error("generator is not in Z-infinity: {0}")]
    NotInZinfty(String),
    #[error("sup norm {0} exceeds 1")]
    NormExceeded(f64),
    #[error("the value 1 is not in the essential range at this resolution (distance {0:.3e})")]
    RangeMiss(f64),
    #[error("strategy inapplicable: {0}")]
    StrategyInapplicable(String),
    #[error("ideal is not certified: {0}")]
    NotCertified(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("unknown function or example: {0}")]
    Unknown(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl LabError {
    /// `true` for errors raised by the mathematics, `false` for I/O and
    /// malformed input files.
    pub fn is_domain(&self) -> bool {
        !matches!(
            self,
            LabError::Format(_) | LabError::Io(_) | LabError::Csv(_) | LabError::Json(_)
        )
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::InvalidGrid(..) => "InvalidGrid",
            LabError::LengthMismatch { .. } => "LengthMismatch",
            LabError::NonFinite(_) => "NonFinite",
            LabError::EmptyRegion => "EmptyRegion",
            LabError::NotAnalytic { .. } => "NotAnalytic",
            LabError::PointOnBoundary(_) => "PointOnBoundary",
            LabError::UnboundedLogData { .. } => "UnboundedLogData",
            LabError::ZeroFunction => "ZeroFunction",
            LabError::SingularPoint => "SingularPoint",
            LabError::BadParameter(_) => "BadParameter",
            LabError::NotOuter(_) => "NotOuter",
            LabError::NotInZinfty(_) => "NotInZinfty",
            LabError::NormExceeded(_) => "NormExceeded",
            LabError::RangeMiss(_) => "RangeMiss",
            LabError::StrategyInapplicable(_) => "StrategyInapplicable",
            LabError::NotCertified(_) => "NotCertified",
            LabError::HypothesisFailed(_) => "HypothesisFailed",
            LabError::InvariantViolation(_) => "InvariantViolation",
            LabError::Unknown(_) => "UnknownExample",
            LabError::Format(_) => "FormatError",
            LabError::Io(_) => "IoError",
            LabError::Csv(_) => "CsvError",
            LabError::Json(_) => "JsonError",
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
