use thiserror::Error;

use crate::rational::{Interval, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("digit {0} is outside 0..=9")]
    InvalidDigit(u8),

    #[error("empty word")]
    EmptyWord,

    #[error("non-binary digit {digit} at index {index}")]
    NonBinary { index: usize, digit: u8 },

    #[error("malformed sequence literal {0:?}")]
    SequenceLiteral(String),

    #[error("malformed rational literal {0:?}")]
    RationalLiteral(String),

    /// A precondition of the called operation does not hold.
    #[error("{0}")]
    Domain(String),

    #[error("root is not bracketed by [{lo}, {hi}]")]
    NoBracket { lo: Box<Rational>, hi: Box<Rational> },

    /// The computation hit its precision or prefix budget before deciding.
    #[error("inconclusive: {reason}")]
    Inconclusive {
        reason: String,
        best: Option<Box<Interval>>,
    },

    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn inconclusive(reason: impl Into<String>, best: Option<Interval>) -> Self {
        Error::Inconclusive {
            reason: reason.into(),
            best: best.map(Box::new),
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Inconclusive { .. })
    }
}
