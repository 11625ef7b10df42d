use std::path::Path;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] vclab_core::Error),
    #[error("{path}: {inner}")]
    InFile { path: String, inner: Box<Error> },
}

impl Error {
    pub(crate) fn at(self, path: &Path) -> Self {
        Error::InFile {
            path: path.display().to_string(),
            inner: Box::new(self),
        }
    }
}
