use pauli_core::Error as CoreError;
use thiserror::Error;

/// Exit status: 2 for configuration errors, 3 for numerical failures.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Input problems become configuration errors, everything the numerics
/// themselves report becomes a numerical failure.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse { .. }
            | CoreError::DimensionMismatch { .. }
            | CoreError::InvalidArgument(_)
            | CoreError::GridCap { .. }
            | CoreError::UnsupportedDimension(_)
            | CoreError::NotPlurisubharmonic { .. }
            | CoreError::NegativeDensity { .. } => CliError::Config(e.to_string()),
            CoreError::Io(io) => CliError::Io(io),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
