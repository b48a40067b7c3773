use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] basen_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed record: {0}")]
    Format(String),
}

impl CliError {
    /// 2 for anything the caller can fix by changing arguments or paths;
    /// 1 when two internal computations disagreed.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(basen_core::Error::InvariantViolation(_)) => 1,
            _ => 2,
        }
    }
}
