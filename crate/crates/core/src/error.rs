use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("negative elapsed time {0} mm")]
    NegativeTime(f64),

    #[error("time ordering violated: t = {t} mm precedes t0 = {t0} mm")]
    TimeOrder { t0: f64, t: f64 },

    #[error("Werner purity {0} outside [0, 1]")]
    InvalidPurity(f64),

    #[error("invalid CP parameterization: {0}")]
    InvalidParameterization(String),

    #[error("species `{species}` has no {param} parameter")]
    MissingParameterization {
        species: String,
        param: &'static str,
    },

    #[error(
        "Werner threshold undefined: denominator 1 + 2Re(eps) - |eps|^2 = {0} is not positive"
    )]
    UndefinedThreshold(f64),

    #[error("inequality index {0} outside 1..=8")]
    InvalidIndex(usize),

    #[error("invalid classical model: {0}")]
    InvalidModel(String),

    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("invalid scan parameters: {0}")]
    InvalidGrid(String),

    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// A species configuration problem, located by file position or entry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("species entry #{index} (`{name}`): {message}")]
    Entry {
        index: usize,
        name: String,
        message: String,
    },

    #[error("duplicate species name `{0}`")]
    Duplicate(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}
