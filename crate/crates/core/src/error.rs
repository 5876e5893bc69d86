use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps [`Error::is_format`] errors to exit code 3 and every other
/// variant to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("format error (line {line}): {msg}")]
    Format { line: usize, msg: String },

    #[error("determinism violated: state {state} has two transitions on letter {letter}")]
    Determinism { state: String, letter: String },

    #[error("the automaton accepts the empty language")]
    EmptyLanguage,

    #[error("word {0:?} is not in the language")]
    NotInLanguage(String),

    #[error("{0}")]
    SubExponential(String),

    #[error("ambiguous growth: {0}")]
    AmbiguousGrowth(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("modulus is not squarefree")]
    NotSquarefree,

    #[error("isolating interval contains {0} roots of the modulus, expected exactly one")]
    Isolation(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0:?} is not a left factor of the language")]
    NotALeftFactor(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not an ultimately periodic word of the representation set")]
    NotRepresentable(String),

    #[error("determinization exceeded the cap of {0} states")]
    Explosion(usize),

    #[error("the composed map has no unique fixed point")]
    NoUniqueFixedPoint,

    #[error("no periodicity detected within {0} digits")]
    NotEventuallyPeriodicWithinBudget(usize),
}

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for malformed input files or arguments.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format { .. } | Error::Determinism { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
