use std::path::PathBuf;

use pencil_resolvent::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or document
/// error, 3 invalid parameters or no reference, 4 numerical failure,
/// 5 sample outside the annulus, 6 I/O.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const INVALID_PARAMS: u8 = 3;
    pub const NUMERICAL: u8 = 4;
    pub const OUTSIDE_ANNULUS: u8 = 5;
    pub const IO: u8 = 6;
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => exit::USAGE,
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) => match e {
                CoreError::InvalidShape(_) | CoreError::NonFinite(_) => exit::USAGE,
                CoreError::InvalidParams(_) | CoreError::NoReference(_) | CoreError::ResampleLimitExceeded { .. } => {
                    exit::INVALID_PARAMS
                }
                CoreError::OutsideAnnulus { .. } => exit::OUTSIDE_ANNULUS,
                _ => exit::NUMERICAL,
            },
        }
    }
}

pub fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
