use brickwork_core::Error as CoreError;
use serde_json::json;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_ASSERT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0} check(s) failed")]
    Assert(usize),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Assert(_) => EXIT_ASSERT,
            CliError::Io(_) | CliError::Numerical(_) => EXIT_FAILURE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Invalid(_) => "invalid_argument",
            CliError::Resource(_) => "resource_limit",
            CliError::Assert(_) => "assertion_failed",
            CliError::Io(_) => "io",
            CliError::Numerical(_) => "numerical",
        }
    }

    /// One-line JSON record for stderr.
    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() }).to_string()
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            CoreError::NotPositive(_) | CoreError::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
