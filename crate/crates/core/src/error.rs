use thiserror::Error;

/// Failure modes shared by all engine layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator universes do not match")]
    UniverseMismatch,
    #[error("configuration error: {0}")]
    Configuration(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("spectral cut violated: {0}")]
    SpectralCut(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cutoff error: {0}")]
    Cutoff(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pole at {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
