use nctorus::NctError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] NctError),
}

impl CliError {
    /// 2 for usage, parse and domain errors, 3 for non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(NctError::NonConvergent(_)) => 3,
            _ => 2,
        }
    }

    /// Prefixes parse errors with the offending file.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            CliError::Lib(NctError::Parse(m)) | CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}
