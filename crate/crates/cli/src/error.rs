use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const RUNTIME: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const SHORTFALL: i32 = 3;
    pub const HYPOTHESIS_FAIL: i32 = 4;
}

/// A config problem, located by key and line where possible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub(crate) fn in_file(self, path: &Path) -> ConfigFileError {
        ConfigFileError {
            path: path.to_path_buf(),
            inner: self,
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.line, &self.key) {
            (Some(line), Some(key)) => write!(f, "line {line}, key `{key}`: {}", self.message),
            (Some(line), None) => write!(f, "line {line}: {}", self.message),
            (None, Some(key)) => write!(f, "key `{key}`: {}", self.message),
            (None, None) => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Error)]
#[error("{}: {inner}", path.display())]
pub struct ConfigFileError {
    pub path: PathBuf,
    pub inner: ConfigError,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in {0}")]
    Config(ConfigFileError),

    #[error("config error: {0}")]
    InlineConfig(#[from] ConfigError),

    #[error("{0}")]
    Usage(String),

    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] annulus_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::InlineConfig(_) | CliError::Usage(_) => exit::CONFIG,
            CliError::Core(annulus_core::Error::InvalidLadder(_)) => exit::CONFIG,
            CliError::Io { .. } | CliError::Core(_) => exit::RUNTIME,
        }
    }
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}
