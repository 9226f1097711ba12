use solnoon_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Parse(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_)
                | CoreError::OutsideNoonWindow { .. }
                | CoreError::BeyondCriticalTheta { .. }
                | CoreError::UninformativeState(_)
                | CoreError::DimensionOutOfRange { .. } => EXIT_CONFIG,
                CoreError::QuadratureFailed { .. }
                | CoreError::StepSizeUnderflow { .. }
                | CoreError::StepBudgetExhausted { .. }
                | CoreError::NonFiniteState { .. }
                | CoreError::Integrity { .. }
                | CoreError::NonInformativeOperatingPoint { .. } => EXIT_NUMERIC,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Config("x".into()).exit_code(), EXIT_CONFIG);
        assert_eq!(
            CliError::from(CoreError::InvalidParameter("x".into())).exit_code(),
            EXIT_CONFIG
        );
        assert_eq!(
            CliError::from(CoreError::NonFiniteState { t: 0.0 }).exit_code(),
            EXIT_NUMERIC
        );
    }
}
