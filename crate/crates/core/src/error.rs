use thiserror::Error;

use crate::lattice::Algebra;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("unsupported rank {rank} for type {algebra} (need {requirement})")]
    UnsupportedRank { algebra: Algebra, rank: usize, requirement: &'static str },

    #[error("mode index {index} does not belong to the {sector} sector")]
    SectorMismatch { index: String, sector: &'static str },

    #[error("`{0}` is not a generator of this Fock space")]
    NotAGenerator(String),

    #[error("truncation window {window} is below the sound bound {bound}")]
    WindowTooSmall { window: i64, bound: i64 },

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("field `{0}` has no quadratic realization in this table")]
    Unrealizable(String),

    #[error("relation {relation} expects {expected} mode indices, got {got}")]
    Arity { relation: String, expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), reason: reason.into() }
    }
}
