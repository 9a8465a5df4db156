use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{}: invalid UTF-8 at line {line} (byte offset {byte_offset})", path.display())]
    Utf8 {
        path: PathBuf,
        line: usize,
        byte_offset: usize,
    },

    #[error("{what}: expected {expected} lines, found {found}")]
    LengthMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("translation provider: {0}")]
    Provider(String),

    #[error("no intermediate translation layer; run ensure_translations (or pass --trans / --translate-cmd) first")]
    MissingTranslations,

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line tool: 1 for I/O and
    /// encoding failures, 2 for configuration and input-contract errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Utf8 { .. } | Error::Provider(_) => 1,
            _ => 2,
        }
    }
}
