use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into two broad groups: bad input (malformed automata,
/// unknown symbols, out-of-range parameters) and contract violations
/// (a caller handed an operation data that breaks its precondition, e.g.
/// a non-congruence partition or a bogus counterexample). The CLI maps
/// the former to exit code 1 and the latter to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("alphabets differ")]
    AlphabetMismatch,

    #[error("quantization parameter must be >= 1")]
    InvalidKappa,

    #[error("value {0} outside [0, 1]")]
    OutOfRange(f64),

    #[error("lambert W0 undefined for {0} < -1/e")]
    LambertDomain(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("learner stalled: {0}")]
    Stalled(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that indicate a broken caller-side contract rather
    /// than bad external input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, Error::ContractViolation(_) | Error::Stalled(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
