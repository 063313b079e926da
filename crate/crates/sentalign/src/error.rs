use std::io;
use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {cause}", path.display())]
    Io { path: PathBuf, cause: io::Error },
    #[error("{}: {cause}", path.display())]
    Json { path: PathBuf, cause: serde_json::Error },
    #[error("{}: {message}", path.display())]
    Toml { path: PathBuf, message: String },
    #[error("{}:{line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
    #[error("missing manifest {}", .0.display())]
    MissingManifest(PathBuf),
    #[error("unusable article: {0}")]
    Unusable(String),
    #[error("invalid extraction template: {0}")]
    Template(String),
    #[error("sentence vector provider: {0}")]
    Provider(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sentalign_core::Error),
}

impl Error {
    pub fn io(path: impl AsRef<Path>) -> impl FnOnce(io::Error) -> Error {
        let path = path.as_ref().to_path_buf();
        move |cause| Error::Io { path, cause }
    }

    pub fn json(path: impl AsRef<Path>) -> impl FnOnce(serde_json::Error) -> Error {
        let path = path.as_ref().to_path_buf();
        move |cause| Error::Json { path, cause }
    }

    pub fn format(path: impl AsRef<Path>, line: usize, message: impl Into<String>) -> Error {
        Error::Format { path: path.as_ref().to_path_buf(), line, message: message.into() }
    }
}
