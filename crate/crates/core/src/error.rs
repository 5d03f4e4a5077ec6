use thiserror::Error;

/// Failure modes of setup, stepping, and I/O.
#[derive(Debug, Error)]
pub enum CdgError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("setup error: {0}")]
    Setup(String),

    #[error("positivity fault at {family} cell {cell}: {detail}")]
    Positivity { family: &'static str, cell: usize, detail: String },

    #[error("runtime limit: {0}")]
    RuntimeLimit(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CdgError {
    pub fn config(msg: impl Into<String>) -> Self {
        CdgError::Config(msg.into())
    }

    pub fn setup(msg: impl Into<String>) -> Self {
        CdgError::Setup(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            CdgError::Config(_) | CdgError::Setup(_) => 2,
            CdgError::Positivity { .. } => 3,
            CdgError::RuntimeLimit(_) => 4,
            CdgError::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CdgError>;
