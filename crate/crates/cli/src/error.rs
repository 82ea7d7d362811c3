use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: `{field}` {message}")]
    Config { field: String, message: String },
    #[error(transparent)]
    Numeric(#[from] cvtele_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot read embedded configuration: {0}")]
    Embedded(String),
}

impl CliError {
    /// 2 for configuration problems, 3 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Embedded(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}
