use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("free variables in sentence: {}", .0.join(", "))]
    FreeVariables(Vec<String>),

    #[error("predicate {predicate} used with arity {first} and {second}")]
    ArityConflict {
        predicate: String,
        first: usize,
        second: usize,
    },

    #[error("invalid occurrence path {0}")]
    InvalidPath(String),

    #[error("constant set must be nonempty")]
    EmptyConstantSet,

    #[error("constant set does not contain {}", .0.join(", "))]
    MissingConstants(Vec<String>),

    #[error("Herbrand universe is empty (no object constants)")]
    EmptyHerbrandUniverse,

    #[error("enumeration budget exceeded: {what} needs {needed} candidates, limit is {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u64,
    },

    #[error("formula is not variable-free")]
    NotGround,

    #[error("symbol {0} is not interpreted")]
    UncoveredSymbol(String),

    #[error("element {0} already belongs to the universe")]
    ElementClash(String),

    #[error("interpretation is malformed: {0}")]
    MalformedInterpretation(String),

    #[error("sentence is {found}, {required} required")]
    Verdict { found: String, required: String },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },

    #[error("unknown verification suite {0}")]
    UnknownSuite(String),
}
