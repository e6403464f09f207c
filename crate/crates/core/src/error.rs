use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid token {0:?}: tokens are non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("symbol {0:?} is not registered in the symbol table")]
    UnknownSymbol(String),

    #[error("transducer accepts no path (empty language)")]
    EmptyLanguage,

    #[error("TER is undefined for an empty reference")]
    UndefinedMetric,

    #[error("cannot aggregate an empty list of utterance scores")]
    EmptyCorpus,

    #[error("invalid alternative set: {0}")]
    InvalidAlternativeSet(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("hypothesis id {0:?} has no matching reference")]
    UnknownHypothesisId(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
