//! Error types shared across the kernel.

use thiserror::Error;

/// Configuration validation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("p = {0} is not prime")]
    InvalidPrime(u64),
    #[error("q = {q} is not a positive power of p = {p}")]
    NonPrimePower { p: u64, q: u64 },
    #[error("precision {0} outside supported range 1..=4096")]
    PrecisionOverflow(u32),
    #[error("truncation window out of range: {0}")]
    WindowOverflow(String),
}

/// Scalar arithmetic failures in K = Q_p(pi).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("division lost all tracked digits: {0}")]
    PrecisionLoss(String),
    #[error("scalar is not invertible in the formal quotient ring (q > p mode): {0}")]
    NotInvertible(String),
    #[error("parameter is not p-adically integral: {0}")]
    NotIntegral(String),
    #[error("exact arithmetic requires rational parameters, got a digit stream")]
    StreamNotExact,
    #[error("scalars belong to different field contexts")]
    CtxMismatch,
}

/// Weyl-algebra operator failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("operation requires flavor {expected}, operator has {found}")]
    FlavorMismatch { expected: String, found: String },
    #[error("result does not fit the truncation window: {0}")]
    TruncationOverflow(String),
    #[error("leading coefficient is not a unit: {0}")]
    NonUnitLeadingCoefficient(String),
    #[error("coefficients grow at weight-rate >= 1 on the window; no eta < 1 fits")]
    NotOverconvergentOnWindow,
    #[error("theta form requires a negative power of x, which the polynomial flavor forbids: {0}")]
    NegativePowerInA1(String),
    #[error(transparent)]
    Scalar(#[from] PadicError),
}

/// Hypergeometric identity-check failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("hypothesis violated: alpha_i - beta_j is an integer ({0})")]
    HypothesisViolation(String),
    #[error("Liouville status indeterminate for a digit-stream parameter; pass the assume flag to proceed")]
    LiouvilleIndeterminate,
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Scalar(#[from] PadicError),
}

/// Liouville-diagnostic failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiouvilleError {
    #[error("parameter is an integer; the diagnostic is defined for non-integers")]
    IsInteger,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("horizon {0} too small to evaluate the requested range")]
    HorizonTooSmall(u32),
}

/// Solver failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("alpha parameter {0} is an integer; the recurrence divides by (l - alpha)")]
    IntegerAlpha(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("integrality of a digit-stream parameter is indeterminate at its horizon; pass the assume flag to proceed")]
    IndeterminateIntegrality,
    #[error("Liouville status indeterminate for a digit-stream parameter; pass the assume flag to proceed")]
    LiouvilleIndeterminate,
    #[error("tail bound cannot reach the requested precision at truncation {truncation} (best bound: {best})")]
    TailBoundTooWeak { truncation: u32, best: String },
    #[error("residual is nonzero over the window at valuation {0}; solve is inconsistent")]
    ResidualNonzero(String),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Scalar(#[from] PadicError),
}
