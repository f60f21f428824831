use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    /// A mathematical precondition failed (seed not socle-annihilated,
    /// window not certifiable, ...). CLI exit code 1.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("window insufficient: {0}")]
    Window(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    /// Malformed input files / options. CLI exit code 2.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The CLI exit-code contract: 1 for mathematical failures, 2 for
    /// parse/I-O problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
