use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),

    #[error("{0}")]
    Resource(String),

    #[error("{0}")]
    Engine(weilres::Error),
}

impl From<weilres::Error> for CliError {
    fn from(e: weilres::Error) -> Self {
        match e {
            weilres::Error::ResourceBound(_) => CliError::Resource(e.to_string()),
            other => CliError::Engine(other),
        }
    }
}

impl CliError {
    /// 2 for input errors, 3 for resource bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Resource(_) => 3,
            CliError::Input(_) | CliError::Engine(_) => 2,
        }
    }
}
