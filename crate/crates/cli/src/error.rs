use std::path::{Path, PathBuf};

use gecsynth::corpus::CorpusError;
use gecsynth::gleu::GleuError;
use gecsynth::morpho::LexiconError;
use gecsynth::noise::NoiseError;
use gecsynth::span::SpanError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INTERNAL: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CONFIG: u8 = 3;
    pub const IO: u8 = 4;
    pub const FORMAT: u8 = 5;
    pub const EXHAUSTED: u8 = 6;
    pub const MISMATCH: u8 = 7;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Exhausted(String),
    #[error("{0}")]
    Mismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Config(_) => exit::CONFIG,
            CliError::Io { .. } => exit::IO,
            CliError::Format { .. } => exit::FORMAT,
            CliError::Exhausted(_) => exit::EXHAUSTED,
            CliError::Mismatch(_) => exit::MISMATCH,
            CliError::Internal(_) => exit::INTERNAL,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }

    pub fn format(path: &Path, message: impl ToString) -> Self {
        CliError::Format {
            path: path.to_owned(),
            message: message.to_string(),
        }
    }

    /// Classifies a corpus error raised while reading or writing `path`.
    pub fn corpus(path: &Path, err: CorpusError) -> Self {
        match err {
            CorpusError::Io { path, source } => CliError::Io { path, source },
            CorpusError::Stream(e) if e.kind() == std::io::ErrorKind::InvalidData => {
                CliError::format(path, format!("invalid UTF-8: {e}"))
            }
            CorpusError::Stream(e) => CliError::io(path, e),
            CorpusError::InvalidRules(m) => CliError::Config(m),
            CorpusError::CorpusTooSmall { .. } => CliError::Exhausted(format!("{}: {err}", path.display())),
            other => CliError::format(path, other),
        }
    }

    pub fn span(path: &Path, err: SpanError) -> Self {
        match err {
            SpanError::LengthMismatch { .. } => CliError::Mismatch(format!("{}: {err}", path.display())),
            other => CliError::format(path, other),
        }
    }

    pub fn gleu(path: &Path, err: GleuError) -> Self {
        match err {
            GleuError::ZeroOrder => CliError::Usage(err.to_string()),
            other => CliError::format(path, other),
        }
    }
}

impl From<NoiseError> for CliError {
    fn from(err: NoiseError) -> Self {
        match err {
            NoiseError::Config(_) | NoiseError::Lexicon(_) | NoiseError::UnknownOp(_) => {
                CliError::Config(err.to_string())
            }
            NoiseError::Exhausted { .. } => CliError::Exhausted(err.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<LexiconError> for CliError {
    fn from(err: LexiconError) -> Self {
        CliError::Config(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
