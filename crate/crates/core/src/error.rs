use thiserror::Error;

/// Everything that can go wrong while building, transforming or
/// propagating grammars.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: empty right-hand side for `{lhs}`")]
    EmptyRhs { line: usize, lhs: String },

    #[error("invalid {kind} name `{name}`")]
    InvalidName { kind: &'static str, name: String },

    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("symbol id {id} out of range for {kind}s")]
    SymbolOutOfRange { kind: &'static str, id: usize },

    #[error("production weight {0} exceeds the 2^31 guard")]
    WeightOverflow(u64),

    #[error("grammar has no productions and no start symbol")]
    NoStartSymbol,

    #[error("start symbol `{0}` is not a declared nonterminal")]
    UnknownStart(String),

    #[error("grammar is not in Chomsky normal form: {0}")]
    NotCnf(String),

    #[error("grammar is not linear: {0}")]
    NotLinear(String),

    #[error("grammar is not in Greibach form: {0}")]
    NotGreibach(String),

    #[error("production does not start with a terminal: {0}")]
    NotLeadingTerminal(String),

    #[error("terminal `{0}` is not part of the alphabet")]
    ForeignTerminal(String),

    #[error("automaton alphabet shares no terminal with the grammar")]
    AlphabetMismatch,

    #[error("automaton: {0}")]
    Automaton(String),

    #[error("sentinel `{0}` occurs in an input alphabet")]
    SentinelCollision(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("constraint scope is empty")]
    EmptyScope,

    #[error("enumeration length {0} exceeds the limit of {1}")]
    EnumerationLimit(usize, usize),

    #[error("brute-force search space {0} exceeds the limit of {1}")]
    SearchSpaceLimit(u128, u128),

    #[error("linear fast path requested but rule `{0}` needs a split-point loop")]
    FastPathUnavailable(String),

    #[error("domain file: {0}")]
    DomainFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
