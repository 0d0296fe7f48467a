use std::fmt;

use thiserror::Error;

/// Which stage of the two-parameter recovery raised an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecoveryStep {
    Order,
    Power,
}

impl fmt::Display for RecoveryStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoveryStep::Order => f.write_str("order (rho) step"),
            RecoveryStep::Power => f.write_str("power (sigma) step"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("InvalidOrder: rho = {0} must lie in (0, 1]")]
    InvalidOrder(f64),

    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),

    #[error("NonConvergent: series did not reach tolerance within {terms} terms (|z| = {z})")]
    NonConvergent { terms: usize, z: f64 },

    #[error("ContourError: ray truncation error {estimate:e} exceeds tolerance {tol:e}")]
    ContourError { estimate: f64, tol: f64 },

    #[error("StepTooLarge: rho +/- h = [{lo}, {hi}] leaves (0, 1)")]
    StepTooLarge { lo: f64, hi: f64 },

    #[error("DimensionMismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("NotElliptic: minimum of the symbol on the unit sphere is {min}")]
    NotElliptic { min: f64 },

    #[error("GridTooCoarse: boundary fraction {ratio:e} exceeds {limit:e}")]
    GridTooCoarse { ratio: f64, limit: f64 },

    #[error("SizeMismatch: expected {expected} samples, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("PrecisionLoss: estimated relative error {estimate:e} exceeds {budget:e}")]
    PrecisionLoss { estimate: f64, budget: f64 },

    #[error("QuadratureNotConverged: error estimate {estimate:e} above tolerance {tol:e}")]
    QuadratureNotConverged { estimate: f64, tol: f64 },

    #[error("NoConvergence: {0}")]
    NoConvergence(String),

    #[error("ObservationTimeTooEarly: t = {t} is below the uniqueness threshold T0 = {t0}")]
    ObservationTimeTooEarly { t: f64, t0: f64 },

    #[error("SolvabilityFailed: ratio {ratio} outside the admissible interval ({lower}, {upper})")]
    SolvabilityFailed { ratio: f64, lower: f64, upper: f64 },

    #[error("BracketError: g has the same sign at both ends ({g_lo:e}, {g_hi:e})")]
    BracketError { g_lo: f64, g_hi: f64 },

    #[error("OrderTooCloseToOne: rho = {0} leaves Gamma(1 - rho) unrepresentable")]
    OrderTooCloseToOne(f64),

    #[error("LambdaBelowThreshold: lambda = {lambda} is below Lambda1 = {threshold}")]
    LambdaBelowThreshold { lambda: f64, threshold: f64 },

    #[error("LambdaEqualsOne: the sigma-observation needs A(xi1) != 1")]
    LambdaEqualsOne,

    #[error("NormalizationError: A(xi0) = {0}, expected 1")]
    NormalizationError(f64),

    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),

    #[error("{step} failed: {source}")]
    Step {
        step: RecoveryStep,
        #[source]
        source: Box<Error>,
    },

    #[error("ParseError: {0}")]
    Parse(String),

    #[error("IOError: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short variant name, used by the CLI when reporting failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NonConvergent { .. } => "NonConvergent",
            Error::ContourError { .. } => "ContourError",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotElliptic { .. } => "NotElliptic",
            Error::GridTooCoarse { .. } => "GridTooCoarse",
            Error::SizeMismatch { .. } => "SizeMismatch",
            Error::PrecisionLoss { .. } => "PrecisionLoss",
            Error::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            Error::NoConvergence(_) => "NoConvergence",
            Error::ObservationTimeTooEarly { .. } => "ObservationTimeTooEarly",
            Error::SolvabilityFailed { .. } => "SolvabilityFailed",
            Error::BracketError { .. } => "BracketError",
            Error::OrderTooCloseToOne(_) => "OrderTooCloseToOne",
            Error::LambdaBelowThreshold { .. } => "LambdaBelowThreshold",
            Error::LambdaEqualsOne => "LambdaEqualsOne",
            Error::NormalizationError(_) => "NormalizationError",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::Step { source, .. } => source.name(),
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "IOError",
        }
    }

    /// The innermost error, looking through step wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Step { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
