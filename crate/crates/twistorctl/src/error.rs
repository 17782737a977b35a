use twistor_core::Error as CoreError;

/// Failures, split by exit code: 2 for usage and configuration problems,
/// 1 for mathematical invariant violations and verdict disagreements.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 1,
            CliError::Core(e) => match e {
                CoreError::DimensionTooSmall(_)
                | CoreError::DimensionTooLarge { .. }
                | CoreError::DimensionMismatch { .. }
                | CoreError::WrongKind(_)
                | CoreError::NotOriented
                | CoreError::SignatureMismatch(_)
                | CoreError::OutsideChart(_)
                | CoreError::BadStep(_)
                | CoreError::UnsupportedFixture(_)
                | CoreError::TooFewSamples { .. } => 2,
                _ => 1,
            },
        }
    }
}
