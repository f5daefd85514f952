use std::path::PathBuf;

/// Everything a command can fail with. [`Error::exit_code`] maps each
/// variant to the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("{}, line {line}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("no .png or .pgm images in {}", .0.display())]
    NoInputs(PathBuf),
    #[error(transparent)]
    Processing(#[from] musica_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// 1 usage, 2 I/O, 3 processing.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Usage(_) | Error::Config { .. } => 1,
            Error::Io { .. } | Error::Format { .. } | Error::NoInputs(_) => 2,
            Error::Processing(_) => 3,
        }
    }
}
