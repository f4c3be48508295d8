use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("tracked set is not a subset of the level set")]
    TrackedNotSubset,
    #[error("not limit deterministic: state {state} has {successors} successors on symbol {symbol}")]
    NotLimitDeterministic {
        state: usize,
        symbol: String,
        successors: usize,
    },
    #[error("not limit deterministic: accepting state {0} has a nondeterministic future")]
    AcceptingNotDeterministic(usize),
    #[error("automaton is not finitely ambiguous")]
    NotFinitelyAmbiguous,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("no automaton of the requested shape found after {0} attempts")]
    ShapeUnsatisfiable(usize),
    #[error("subsumption is only defined on tracking-phase macrostates")]
    PhaseMismatch,
    #[error("invalid state order: {0}")]
    InvalidOrder(String),
    #[error("{algorithm} does not apply: {reason}")]
    IncompatibleAlgorithm { algorithm: String, reason: String },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: state {state} is not declared")]
    UndeclaredState { line: usize, state: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}

impl Error {
    /// True for errors caused by an algorithm being applied outside its input class.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotLimitDeterministic { .. }
                | Error::AcceptingNotDeterministic(_)
                | Error::NotFinitelyAmbiguous
                | Error::InvalidPartition(_)
                | Error::AlphabetMismatch
                | Error::ShapeUnsatisfiable(_)
                | Error::PhaseMismatch
                | Error::TrackedNotSubset
                | Error::IncompatibleAlgorithm { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
