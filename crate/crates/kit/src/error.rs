use std::path::{Path, PathBuf};

/// Errors of the command-line layer, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum KitError {
    /// A certificate has verdict `fail`.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {msg}", path.display())]
    Format { path: PathBuf, msg: String },
    /// A computed invariant contradicts its expected value or a stage failed
    /// internally.
    #[error("{stage}: {msg}")]
    Internal { stage: &'static str, msg: String },
}

impl KitError {
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Verification(_) => 1,
            KitError::Usage(_) => 2,
            KitError::Io { .. } | KitError::Format { .. } => 3,
            KitError::Internal { .. } => 4,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        KitError::Io { path: path.to_path_buf(), source }
    }

    pub fn format(path: &Path, msg: impl ToString) -> Self {
        KitError::Format { path: path.to_path_buf(), msg: msg.to_string() }
    }

    pub fn internal(stage: &'static str, msg: impl ToString) -> Self {
        KitError::Internal { stage, msg: msg.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, KitError>;
