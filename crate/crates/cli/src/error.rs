use ahaut_core::CoreError;
use thiserror::Error;

/// CLI failures, each tied to an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Input { location: String, message: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Breach(String),
}

impl CliError {
    pub fn input(file: &str, path: &str, message: impl Into<String>) -> Self {
        let location = match (file.is_empty(), path.is_empty()) {
            (true, true) => "input".to_string(),
            (true, false) => path.to_string(),
            (false, true) => file.to_string(),
            (false, false) => format!("{file}: {path}"),
        };
        Self::Input { location, message: message.into() }
    }

    pub fn from_core(file: &str, path: &str, e: CoreError) -> Self {
        match e {
            CoreError::UnsupportedModel(_)
            | CoreError::UnsupportedAutomorphism(_)
            | CoreError::NotInvolution
            | CoreError::GroupTooLarge { .. } => Self::Unsupported(e.to_string()),
            CoreError::InvariantBreach(_) | CoreError::Unstable(_) => Self::Breach(e.to_string()),
            other => Self::input(file, path, other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Input { .. } => 1,
            Self::Unsupported(_) => 2,
            Self::Breach(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Input { .. } => "input",
            Self::Unsupported(_) => "unsupported",
            Self::Breach(_) => "invariant-breach",
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        Self::from_core("", "", e)
    }
}
