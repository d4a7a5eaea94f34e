use deltapol::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("numerical failure: {0}")]
    NonConvergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::NonConvergence(_) => 4,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Degenerate(m) | CliError::NonConvergence(m) => {
                m.clone()
            }
            CliError::Io(e) => e.to_string(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::DegenerateRegion { .. } => CliError::Degenerate(e.to_string()),
            Error::QuadratureNonConvergence { .. }
            | Error::NonConvergence { .. }
            | Error::Singular { .. }
            | Error::RootNotBracketed { .. } => CliError::NonConvergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
