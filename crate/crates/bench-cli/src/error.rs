use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("experiment error: {0}")]
    Experiment(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Experiment(_) | CliError::Io { .. } => 3,
        }
    }
}

impl From<mmimo_core::Error> for CliError {
    fn from(e: mmimo_core::Error) -> Self {
        CliError::Experiment(e.to_string())
    }
}
