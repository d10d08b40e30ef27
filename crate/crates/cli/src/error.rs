use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Numerical(#[from] pmcs_core::Error),

    #[error("{failed} of {total} rows failed to converge")]
    RowsUnconverged { failed: usize, total: usize },
}

impl CliError {
    /// 2 for bad input or I/O, 3 for numerical-convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(e) if e.is_convergence() => 3,
            CliError::RowsUnconverged { .. } => 3,
            _ => 2,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
