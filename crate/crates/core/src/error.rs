use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("diagram is not planar: {0}")]
    NonPlanar(String),
    #[error("orientation conflict: {0}")]
    OrientationConflict(String),
    #[error("bad component index {index} (diagram has {count})")]
    BadComponent { index: usize, count: usize },
    #[error("resource limit exceeded: {needed} generators requested, limit is {limit}")]
    ResourceLimit { needed: u128, limit: u128 },
    #[error("lee generator is not a cycle: {0}")]
    NotACycle(String),
    #[error("inconsistent homology module: {0}")]
    InconsistentModule(String),
    #[error("link is not null-homologous: eta = {0:?}")]
    NotNullHomologous(Vec<i64>),
    #[error("diagram is not positive ({0} negative crossings)")]
    NotPositive(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Short machine-readable name used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::NonPlanar(_) => "NonPlanar",
            Error::OrientationConflict(_) => "OrientationConflict",
            Error::BadComponent { .. } => "BadComponent",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::NotACycle(_) => "NotACycle",
            Error::InconsistentModule(_) => "InconsistentModule",
            Error::NotNullHomologous(_) => "NotNullHomologous",
            Error::NotPositive(_) => "NotPositive",
            Error::Invalid(_) => "Invalid",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
