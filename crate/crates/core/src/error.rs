use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the library. Messages start with the variant name so
/// diagnostics can be matched by callers and scripts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("EmptyUniverse: a structure must have at least one element")]
    EmptyUniverse,
    #[error("DuplicateElement: element {0:?} occurs more than once in the universe")]
    DuplicateElement(String),
    #[error("DuplicateSymbol: relation symbol {0:?} is declared more than once")]
    DuplicateSymbol(String),
    #[error("InvalidArity: relation symbol {symbol:?} has arity {arity}, arities must be at least 1")]
    InvalidArity { symbol: String, arity: usize },
    #[error("UnknownSymbol: relation {0:?} is not declared in the signature")]
    UnknownSymbol(String),
    #[error("MissingRelation: no tuples given for relation symbol {0:?}")]
    MissingRelation(String),
    #[error("ArityMismatch: tuple {tuple:?} of relation {symbol:?} has length {found}, expected {expected}")]
    ArityMismatch {
        symbol: String,
        tuple: Vec<String>,
        expected: usize,
        found: usize,
    },
    #[error("ForeignElement: element {element:?} (in {context}) is not in the universe")]
    ForeignElement { element: String, context: String },
    #[error("DuplicateTuple: tuple {tuple:?} occurs more than once in relation {symbol:?}")]
    DuplicateTuple { symbol: String, tuple: Vec<String> },
    #[error("SignatureMismatch: structures are over different signatures")]
    SignatureMismatch,
    #[error("ZeroCopies: an n-fold disjoint union needs n >= 1")]
    ZeroCopies,
    #[error("SliceTooLarge: more than {limit} isomorphism classes in the requested slice")]
    SliceTooLarge { limit: usize },
    #[error("ScalarOverflow: value {0} does not fit the chosen scalar type")]
    ScalarOverflow(String),
    #[error("Isomorphic: the two structures are isomorphic and cannot be separated")]
    Isomorphic,
    #[error("ProbeExhausted: no suitable probe structure with at most {max_probe} elements")]
    ProbeExhausted { max_probe: usize },
    #[error("NotEquivalentClass: {0}")]
    NotEquivalentClass(String),
    #[error("MultiplierOverflow: distinguisher multiplier exceeded 2^64 (internal error)")]
    MultiplierOverflow,
    #[error("DuplicateNodes: Vandermonde nodes {0} and {1} coincide")]
    DuplicateNodes(usize, usize),
    #[error("LengthMismatch: expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("EmptyCombination: the linear combination has no terms")]
    EmptyCombination,
    #[error("OracleInconsistent: {0}")]
    OracleInconsistent(String),
    #[error("OracleFailure: {0}")]
    OracleFailure(String),
    #[error("InvalidCoefficient: {0:?} is not an integer or p/q rational")]
    InvalidCoefficient(String),
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}
