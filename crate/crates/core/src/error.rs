use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("profile is not integrable over the real line")]
    NonIntegrable,

    #[error("arc length {s} outside the traced interval [{lo}, {hi}]")]
    OutOfRange { s: f64, lo: f64, hi: f64 },

    #[error("parameters outside the admissible domain: {0}")]
    DomainError(String),

    #[error("strip hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("factorization of the shifted pencil failed at pivot {pivot} (value {value:e})")]
    FactorizationFailed { pivot: usize, value: f64 },

    #[error("dense oracle limited to {limit} unknowns, got {dim}")]
    TooLarge { dim: usize, limit: usize },

    #[error("largest computed eigenvalue {largest} does not exceed the counting window {window}")]
    InsufficientPairs { largest: f64, window: f64 },

    #[error("trial function does not vanish at the ends of its table")]
    UnsupportedTail,

    #[error("perturbation support crosses a zero or sign change of the curvature")]
    BadSupport,

    #[error("point ({c1}, {c2}, {eps}) lies outside the negative region")]
    OutsideNegativeRegion { c1: f64, c2: f64, eps: f64 },

    #[error("profile is not periodic with period {0}")]
    NotPeriodic(f64),

    #[error("closed-form identity failed: {0}")]
    Inconsistent(String),

    #[error("output failed: {0}")]
    Io(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
