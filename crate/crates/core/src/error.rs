use thiserror::Error;

use crate::dyadic::BitString;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value outside the domain of an operation, e.g. the associated string of `1`.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {what} {got} exceeds bound {bound}")]
    Range {
        what: &'static str,
        got: usize,
        bound: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An item of the wrong kind (string where a dyadic was expected, or vice versa).
    #[error("type error: {0}")]
    Type(String),

    #[error("approximation decreases at stage {stage}")]
    NonMonotone { stage: usize },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid antichain: {0}")]
    InvalidAntichain(String),

    #[error("machine is not prefix-free: code {shorter} is a prefix of {longer}")]
    PrefixFree { shorter: BitString, longer: BitString },

    #[error("machine violates the Kraft inequality: code weights sum past 1")]
    Kraft,

    #[error("{construction}: precondition failed: {message}")]
    Precondition {
        construction: &'static str,
        message: String,
    },

    #[error("{construction}: capacity exhausted: {message}")]
    Capacity {
        construction: &'static str,
        message: String,
    },

    #[error("contract violation: {0}")]
    Contract(String),
}

impl Error {
    /// Stable short code, used by the CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E-DOMAIN",
            Error::Range { .. } => "E-RANGE",
            Error::Parse { .. } => "E-PARSE",
            Error::Type(_) => "E-TYPE",
            Error::NonMonotone { .. } => "E-MONOTONE",
            Error::InvalidTree(_) => "E-TREE",
            Error::InvalidAntichain(_) => "E-ANTICHAIN",
            Error::PrefixFree { .. } => "E-PREFIX-FREE",
            Error::Kraft => "E-KRAFT",
            Error::Precondition { .. } => "E-PRECONDITION",
            Error::Capacity { .. } => "E-CAPACITY",
            Error::Contract(_) => "E-CONTRACT",
        }
    }

    /// Whether the error comes from malformed or invalid input, as opposed to a
    /// construction that could not proceed.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Precondition { .. } | Error::Capacity { .. } | Error::Contract(_)
        )
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
