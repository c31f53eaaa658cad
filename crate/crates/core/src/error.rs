use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value")]
    NegativeRadicand,
    #[error("square root does not denest")]
    NotDenestable,
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
    #[error("divisor series has zero constant term")]
    NonUnitDivisor,
    #[error("inner series has nonzero constant term")]
    NonzeroConstantInner,
    #[error("base series must have constant term 1")]
    NonUnitBase,
    #[error("malformed differential equation: {0}")]
    MalformedOde(String),
    #[error("transform has a pole at the argument")]
    PoleAtArgument,
    #[error("formula `{0}` is not convergent")]
    DivergentFormula(String),
    #[error("working precision exhausted")]
    PrecisionExhausted,
    #[error("argument outside the disk of convergence")]
    OutOfDisk,
    #[error("point outside the domain of the map")]
    OutsideDomain,
    #[error("formula has no tau value")]
    MissingTau,
    #[error("companion series does not converge")]
    DivergentCompanion,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {0} divides the base")]
    PrimeDividesBase(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
