use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix")]
    Singular,

    #[error("invalid weight vector {weights:?}: {reason}")]
    InvalidWeight { weights: Vec<String>, reason: String },

    #[error("degenerate simplex: vertices are affinely dependent")]
    Degenerate,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value too large for exact enumeration: {0}")]
    Overflow(String),

    #[error("unknown {kind} strategy `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },
}

impl Error {
    pub(crate) fn invalid_weight<T: ToString>(weights: &[T], reason: impl Into<String>) -> Self {
        Error::InvalidWeight {
            weights: weights.iter().map(|w| w.to_string()).collect(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
