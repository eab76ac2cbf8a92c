use thiserror::Error;

/// Failures mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<chland::Error> for CliError {
    fn from(e: chland::Error) -> Self {
        use chland::Error as E;
        let msg = e.to_string();
        match e {
            E::Io(_) | E::Format(_) => CliError::Io(msg),
            E::ProjectionFailed { .. } | E::Bracket(_) => CliError::Numeric(msg),
            E::Domain(_) | E::UnsupportedDimension(_) | E::GridMismatch(_) | E::Geometry(_) | E::Config(_) => {
                CliError::Config(msg)
            }
        }
    }
}
