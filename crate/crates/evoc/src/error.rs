use thiserror::Error;

/// Invalid configuration or contract violation surfaced at setup time.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{msg}")]
pub struct ConfigError {
    msg: String,
}

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> ConfigError {
        ConfigError { msg: msg.into() }
    }
}
