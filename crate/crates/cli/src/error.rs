use desk_numerics::NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", .source.name())]
    Numeric {
        #[from]
        source: NumError,
    },
    #[error("MalformedCsv: {0}")]
    MalformedCsv(String),
    #[error("MalformedPgm: {0}")]
    MalformedPgm(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 for bad invocations and unreadable input, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
