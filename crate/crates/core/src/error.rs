use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched lengths, zero horizons, missing feedback and similar caller mistakes.
    #[error("configuration error: {0}")]
    Config(String),
    #[error("policy error: {0}")]
    Policy(String),
    /// A quantity requested outside its domain of definition.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid game: {0}")]
    Game(String),
    #[error("generation error: {0}")]
    Generation(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// Failure inside one play, tagged with the game and seed.
    #[error("{context}: {source}")]
    Play {
        context: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn policy(msg: impl Into<String>) -> Self {
        Error::Policy(msg.into())
    }
}
