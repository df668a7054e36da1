use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {reason}")]
    Flag { flag: &'static str, reason: String },

    #[error(transparent)]
    Core(#[from] fracspde::Error),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Config {
        path: String,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("thread pool: {0}")]
    Threads(String),
}

impl CliError {
    pub fn flag(flag: &'static str, reason: impl Into<String>) -> Self {
        CliError::Flag {
            flag,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Attach the offending flag to a library error.
pub trait FlagContext<T> {
    fn flag(self, flag: &'static str) -> Result<T>;
}

impl<T> FlagContext<T> for fracspde::Result<T> {
    fn flag(self, flag: &'static str) -> Result<T> {
        self.map_err(|e| CliError::flag(flag, e.to_string()))
    }
}
