use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Budget and search exhaustion are reported separately from malformed input
/// so callers can distinguish "inconclusive" from "wrong".
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(u8, u8),
    #[error("invalid arity {0}: {1}")]
    InvalidArity(usize, &'static str),
    #[error("invalid address `{0}` for arity {1}")]
    InvalidAddress(String, u8),
    #[error("addresses {0} and {1} are prefix-comparable")]
    PrefixViolation(String, String),
    #[error("leaf {0} is not in the domain tree")]
    LeafNotPresent(String),
    #[error("invalid tree pair: {0}")]
    InvalidTreePair(String),
    #[error("element is not an involution")]
    NotAnInvolution,
    #[error("parity is not a class invariant for even arity {0}")]
    EvenArityParity(u8),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("labeling mode mismatch: expected {0}")]
    ModeMismatch(&'static str),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown group label `{0}`")]
    UnknownGroup(String),
    #[error("vertex subset is not a module")]
    NotAModule,
    #[error("graph is a clique: no non-adjacent pair exists")]
    IsClique,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds bound {0}")]
    OrderBound(usize),
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("not a homomorphism: relator {0} does not map to the identity")]
    NotAHomomorphism(usize),
    #[error("map is not surjective: image has order {image} but target has order {target}")]
    NotSurjective { image: usize, target: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("incomparable fingerprints: {0}")]
    Incomparable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("poset is not atomistic: {0}")]
    NotAtomistic(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
