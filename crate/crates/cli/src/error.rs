use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or config file syntax.
    #[error("{0}")]
    Usage(String),
    /// Missing, malformed or inconsistent input data.
    #[error(transparent)]
    Data(#[from] thematic_core::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Data(e) => e.code(),
            CliError::Internal(_) => "internal",
        }
    }
}

impl From<thematic_server::StartupError> for CliError {
    fn from(e: thematic_server::StartupError) -> Self {
        use thematic_server::StartupError as S;
        match e {
            S::Config(msg) => CliError::Usage(msg),
            S::Core(e) => CliError::Data(e),
            other @ S::TooManyPapers { .. } => CliError::Data(thematic_core::Error::Config(other.to_string())),
            other => CliError::Internal(other.to_string()),
        }
    }
}
