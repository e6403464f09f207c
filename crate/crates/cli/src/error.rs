use serde_json::json;
use thiserror::Error;

/// Failures surfaced by the command-line tool, split by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable inputs or an inconsistent configuration.
    #[error("{0}")]
    Usage(String),

    /// Input files that were read but did not validate.
    #[error("{path}: {source}")]
    Data { path: String, source: terkit::Error },

    /// Scoring failed on otherwise valid inputs.
    #[error(transparent)]
    Core(#[from] terkit::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn data(path: impl Into<String>, source: terkit::Error) -> Self {
        CliError::Data {
            path: path.into(),
            source,
        }
    }

    pub fn io(path: impl Into<String>, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            message: e.to_string(),
        }
    }

    /// 1 for usage and configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Data { .. } | CliError::Core(_) => 2,
        }
    }

    /// Machine-readable form for `--error-json`.
    pub fn to_json(&self) -> serde_json::Value {
        let kind = if self.exit_code() == 1 {
            "usage"
        } else {
            "data"
        };
        let (path, line) = match self {
            CliError::Data {
                path,
                source: terkit::Error::Parse { line, .. },
            } => (Some(path.as_str()), Some(*line)),
            CliError::Data { path, .. } | CliError::Io { path, .. } => (Some(path.as_str()), None),
            _ => (None, None),
        };
        json!({
            "error": kind,
            "message": self.to_string(),
            "path": path,
            "line": line,
            "exit_code": self.exit_code(),
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
