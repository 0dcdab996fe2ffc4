use thiserror::Error;

use crate::linalg::RatVector;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("region is unbounded along ray {ray:?}")]
    Unbounded { ray: RatVector },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("point is outside the parameter domain: {0}")]
    OutOfDomain(String),

    #[error("point is not interior: {0}")]
    NotInterior(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    #[error("polytope is not realizable in this form: {0}")]
    NotRealizable(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
