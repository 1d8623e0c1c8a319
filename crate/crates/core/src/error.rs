use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("award length must be at least 2, got {0}")]
    BadJ(usize),

    #[error("cam count {cams} is not a positive multiple of award length {award_length}")]
    BadPeriod { cams: usize, award_length: usize },

    #[error("invalid payout distribution: {0}")]
    BadDist(String),

    #[error("invalid reel machine: {0}")]
    BadReels(String),

    #[error("invalid pattern {0:?}: needs at least one A and one B and no other letters")]
    BadPattern(String),

    #[error("pointer threshold K={k} outside 1..={max}")]
    BadK { k: usize, max: usize },

    #[error("mixture weight {0} outside (0, 1)")]
    BadGamma(f64),

    #[error("transition matrix is not row-stochastic: {0}")]
    NotStochastic(String),

    #[error("transition matrix is reducible")]
    Reducible,

    #[error("stationary linear system is singular")]
    SingularSystem,

    #[error("segment variance parameter is not positive: {0}")]
    DegenerateVariance(f64),

    #[error("invalid simulation config: {0}")]
    BadConfig(String),

    #[error("invalid machine-spec file: {0}")]
    BadSpecFile(String),
}

impl Error {
    /// Stable variant name, used by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::BadJ(_) => "BadJ",
            Error::BadPeriod { .. } => "BadPeriod",
            Error::BadDist(_) => "BadDist",
            Error::BadReels(_) => "BadReels",
            Error::BadPattern(_) => "BadPattern",
            Error::BadK { .. } => "BadK",
            Error::BadGamma(_) => "BadGamma",
            Error::NotStochastic(_) => "NotStochastic",
            Error::Reducible => "Reducible",
            Error::SingularSystem => "SingularSystem",
            Error::DegenerateVariance(_) => "DegenerateVariance",
            Error::BadConfig(_) => "BadConfig",
            Error::BadSpecFile(_) => "BadSpecFile",
        }
    }
}
