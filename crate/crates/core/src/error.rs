use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("coordinate {index} outside 1..={n}")]
    CoordinateOutOfRange { index: usize, n: usize },

    #[error("restriction fixes every coordinate; the restricted domain is empty")]
    EmptyDomain,

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("work budget exceeded: {needed} elementary steps, limit {limit}")]
    Budget { needed: u128, limit: u128 },

    #[error("instance size not realizable: {0}")]
    Size(String),

    #[error("rejection witness failed re-verification: {0}")]
    Witness(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI on stderr.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } | Error::CoordinateOutOfRange { .. } => "DIMENSION",
            Error::EmptyDomain => "EMPTY_DOMAIN",
            Error::Contract(_) => "CONTRACT",
            Error::Budget { .. } => "BUDGET",
            Error::Size(_) => "SIZE",
            Error::Witness(_) => "WITNESS",
            Error::Config(_) => "CONFIG",
            Error::Distribution(_) => "DISTRIBUTION",
            Error::Parse(_) => "PARSE",
        }
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::Dimension { expected, found })
        }
    }
}
