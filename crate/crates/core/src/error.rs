use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet size {0} exceeds the supported maximum of 256")]
    AlphabetTooLarge(usize),
    #[error("transition matrix must be {expected}x{expected}, found a row of length {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("symbol {symbol} is out of range for an alphabet of size {alphabet}")]
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    #[error("symbol {0} has no successor (empty row)")]
    DeadState(usize),
    #[error("symbol {0} has no predecessor (empty column); the shift is not surjective")]
    NotSurjective(usize),
    #[error("word {word} is not admissible at position {position}")]
    WordInadmissible { word: String, position: usize },
    #[error("cycle {0} is not primitive")]
    NotPrimitive(String),
    #[error("period word must be nonempty")]
    EmptyPeriod,
    #[error("window must be at least 1")]
    EmptyWindow,
    #[error("cylinder function is missing a value for word {0}")]
    MissingValue(String),
    #[error("stream certified to {certified} symbols, {requested} requested")]
    GeneratorExhausted { requested: usize, certified: usize },
    #[error("{what}: count {count} exceeds cap {cap}{hint}")]
    Overflow {
        what: &'static str,
        count: u128,
        cap: u128,
        hint: &'static str,
    },
    #[error("lambda must have unit modulus, |lambda| = {0}")]
    NotUnitModulus(f64),
    #[error("singular value computation did not converge")]
    NoConvergence,
    #[error("no window of length <= {cap} separates the first {positions} positions")]
    SeparationFailure { cap: usize, positions: usize },
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid stream parameters: {0}")]
    InvalidStream(String),
}
