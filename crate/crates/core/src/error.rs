use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hermite index {index} exceeds the basis cap {cap}")]
    CapExceeded { index: usize, cap: usize },
    #[error("precision violation: {0}")]
    Precision(String),
    #[error("non-finite value: {0}")]
    NonFinite(String),
    #[error("spectral Fourier backend requires a Hermite-form sequence")]
    NotHermiteForm,
    #[error("serialization: {0}")]
    Serialization(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
