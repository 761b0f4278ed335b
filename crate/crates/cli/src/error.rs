use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error in `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] targetzone::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}
