use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ConvergenceFailure(_) | Error::BracketFailure(_) | Error::InvalidBounds(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
