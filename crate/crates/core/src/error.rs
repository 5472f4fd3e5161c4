use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible coefficient fields: {0} vs {1}")]
    IncompatibleField(String, String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("not a point: {0}")]
    NotAPoint(String),

    #[error("wild action: group order {order} shares a factor with characteristic {characteristic}")]
    WildAction { order: usize, characteristic: u64 },

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("extension has the wrong shape: {0}")]
    Shape(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
