use softsnake_core::wire::{ApiErrorBody, ApiErrorKind};

/// Failure of a subcommand. Validation errors exit with 2, runtime errors
/// with 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    /// The JSON line written to stderr.
    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            CliError::Validation(m) => (ApiErrorKind::Validation, m),
            CliError::Runtime(m) => (ApiErrorKind::Runtime, m),
        };
        let body = ApiErrorBody {
            kind,
            message: message.clone(),
        };
        serde_json::json!({ "error": body }).to_string()
    }
}

impl From<softsnake_core::Error> for CliError {
    fn from(e: softsnake_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<softsnake_client::Error> for CliError {
    fn from(e: softsnake_client::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

impl From<softsnake_service::ServiceError> for CliError {
    fn from(e: softsnake_service::ServiceError) -> Self {
        match e {
            softsnake_service::ServiceError::Config(e) => e.into(),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
