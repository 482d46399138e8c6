use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("request of size {requested} exceeds the configured cap of {cap}")]
    Resource { requested: usize, cap: usize },

    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown model kind `{0}`")]
    UnknownModel(String),

    #[error("threshold {threshold} is incompatible with model {model}: {reason}")]
    ThresholdMismatch {
        model: String,
        threshold: usize,
        reason: &'static str,
    },

    #[error("transition matrix: {0}")]
    Matrix(String),

    #[error("malformed number `{0}`")]
    Parse(String),

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: impl ToString, expected: &'static str) -> Error {
    Error::Domain {
        what,
        value: value.to_string(),
        expected,
    }
}
