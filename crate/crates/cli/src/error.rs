use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] extricat_core::Error),
    #[error("cache: {0}")]
    Cache(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use extricat_core::Error as E;
        match self {
            CliError::Core(E::CapReached(_)) => 2,
            CliError::Core(E::Construction { .. }) => 1,
            _ => 3,
        }
    }
}
