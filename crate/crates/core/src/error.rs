use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("malformed LZW code stream: {0}")]
    MalformedCodes(String),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// `line` is 0 for command-line overrides.
    #[error("config key `{key}` ({}): {reason}", config_location(*.line))]
    Config {
        key: String,
        line: usize,
        reason: String,
    },

    #[error("network has {nodes} nodes, above the transition-diagram cap of {cap}")]
    TooManyNodes { nodes: usize, cap: usize },

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn config_location(line: usize) -> String {
    if line == 0 {
        "command line".into()
    } else {
        format!("line {line}")
    }
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than runtime failures.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
