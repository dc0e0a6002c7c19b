use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Infinite values are never errors: `+∞` is an ordinary
/// [`ExtendedReal`](crate::conjugate::ExtendedReal) result.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("empty effective domain")]
    EmptyEffectiveDomain,

    #[error("effective domain is not an interval: finite values at indices {first}..={last} are interrupted by +inf at {gap}")]
    DisconnectedDomain { first: usize, last: usize, gap: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("operation requires a law on the nonnegative integers, got {0}")]
    NotDiscrete(&'static str),

    #[error("mean outside cone: a = {0} < 0")]
    MeanOutsideCone(f64),

    #[error("increase truncation: mean {mean} is not attainable with {truncation} terms")]
    IncreaseTruncation { mean: f64, truncation: usize },

    #[error("support gap: formula requires p_n > 0, but p_{0} = 0")]
    SupportGap(usize),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("map is not a bijection: point {0} has no unique preimage")]
    NotBijective(usize),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("series diverges: spectral radius exceeds convergence radius (r(A) = {spectral_radius}, R = {radius})")]
    SeriesDiverges { spectral_radius: f64, radius: f64 },

    #[error("series truncation cap of {cap} terms reached with tail bound {tail_bound:e} above tolerance {tol:e}")]
    TruncationCap { cap: usize, tail_bound: f64, tol: f64 },

    #[error("negative series coefficient c_{index} = {value}")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("ln r undefined: spectral radius is zero")]
    LnRUndefined,

    #[error("probability measure required: mass = {0}")]
    ProbabilityRequired(f64),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Self::InvalidGrid(_) => "invalid_grid",
            Self::EmptyEffectiveDomain => "empty_effective_domain",
            Self::DisconnectedDomain { .. } => "disconnected_domain",
            Self::InvalidDistribution(_) => "invalid_distribution",
            Self::NotDiscrete(_) => "not_discrete",
            Self::MeanOutsideCone(_) => "mean_outside_cone",
            Self::IncreaseTruncation { .. } => "increase_truncation",
            Self::SupportGap(_) => "support_gap",
            Self::InvalidSystem(_) => "invalid_system",
            Self::NotBijective(_) => "not_bijective",
            Self::InvalidMatrix(_) => "invalid_matrix",
            Self::SeriesDiverges { .. } => "series_diverges",
            Self::TruncationCap { .. } => "truncation_cap",
            Self::NegativeCoefficient { .. } => "negative_coefficient",
            Self::LnRUndefined => "ln_r_undefined",
            Self::ProbabilityRequired(_) => "probability_required",
            Self::InvalidMeasure(_) => "invalid_measure",
            Self::LengthMismatch { .. } => "length_mismatch",
            Self::Parse(_) => "parse",
        }
    }
}
