use alloc::string::String;

use crate::twistor::Question;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("half-dimension n = {0} is too small; 2n >= 4 is required")]
    DimensionTooSmall(usize),
    #[error("dimension {dim} exceeds the dense tensor-space guard ({max})")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a {0} structure")]
    WrongKind(&'static str),
    #[error("operands live over different model structures")]
    BaseMismatch,
    #[error("operation requires an oriented structure")]
    NotOriented,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("matrix is singular or nearly degenerate ({0})")]
    Degenerate(String),
    #[error("input is not symmetric (residual {0:e})")]
    NotSymmetric(f64),
    #[error("not a compatible complex structure: {0}")]
    NotComplexStructure(String),
    #[error("2-form is not in the anti-invariant space of j (residual {0:e})")]
    NotAntiInvariant(f64),
    #[error("tensor is not Ricci-flat (residual {0:e})")]
    NotRicciFlat(f64),
    #[error("tensor violates the curvature identities (residual {0:e})")]
    NotCurvature(f64),
    #[error("point {0} lies outside the chart domain")]
    OutsideChart(String),
    #[error("finite-difference step {0:e} outside [1e-6, 1e-1]")]
    BadStep(f64),
    #[error("finite-difference curvature failed the pre-snap gate (residual {0:e})")]
    FiniteDifference(f64),
    #[error("unsupported fixture: {0}")]
    UnsupportedFixture(String),
    #[error("at least {needed} samples are required, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error(
        "{question:?}: closed form says {closed_form}, sampling says {sampled} (worst residual {worst_residual:e})"
    )]
    VerdictDisagreement { question: Question, closed_form: bool, sampled: bool, worst_residual: f64 },
}
