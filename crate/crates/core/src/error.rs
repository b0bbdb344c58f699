use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("invalid operation: {0}")]
    InvalidOperation(String),
    #[error("unknown relation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("pp-formula `{0}` defines the empty relation")]
    EmptyDefinedRelation(String),
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: u8, right: u8 },
    #[error("arity {arity} exceeds the enumeration cap {cap}")]
    ArityTooLarge { arity: usize, cap: usize },
    #[error("search space too large: {0}")]
    InfeasibleArity(String),
    #[error("language is not over the Boolean domain")]
    NonBooleanDomain,
    #[error("unknown co-clone `{0}`")]
    UnknownCoclone(String),
    #[error("classification has no tractability witness")]
    NotTractable,
    #[error("definition of `{0}` contains an equality atom")]
    NotEqualityFree(String),
    #[error("definition of `{0}` has existentially quantified variables")]
    NotQuantifierFree(String),
    #[error("fixed NO instance rejected: {0}")]
    BadNoInstance(String),
    #[error("source instance is not over the expected language: {0}")]
    WrongSourceLanguage(String),
    #[error("instance lacks the bottom/top convention: {0}")]
    MissingBotTopConvention(String),
    #[error("map is not surjective onto the target domain")]
    NotSurjective,
    #[error("subset is empty")]
    EmptySubset,
    #[error("domain size {domain} is not {base}^{power}")]
    BadProductArity { domain: u8, base: u8, power: usize },
    #[error("template is not a core")]
    NotCore,
    #[error("need at least {needed} variables, got {got}")]
    TooFewVariables { needed: usize, got: usize },
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Semantic(String),
    #[error("oracle failed: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
