use thiserror::Error;

/// Errors surfaced by the library. CLI code maps these onto exit code 2.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),

    #[error("constant term {0} is not a unit in the coefficient domain")]
    NonUnitConstant(String),

    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),

    #[error("unknown series name `{0}`")]
    UnknownSeries(String),

    #[error("truncation {have} too small, need at least {need}")]
    TruncationTooSmall { need: usize, have: usize },

    #[error("{requested} coefficients requested, ceiling is {ceiling}")]
    CeilingExceeded { requested: usize, ceiling: usize },

    #[error("enumeration cap exceeded: n = {n}, cap = {cap}")]
    CapExceeded { n: u64, cap: u64 },

    #[error("series is not normalized: {0}")]
    NotNormalized(String),

    #[error("modular input loses information: gcd(p^(l-1), {modulus}) > 1 for p = {p}")]
    InformationLoss { p: u64, modulus: u32 },

    #[error("weight {0} is not an integer")]
    NonIntegralWeight(String),

    #[error("unsupported level {0}: neither N nor N/2 is squarefree")]
    UnsupportedLevel(u64),

    #[error("invalid family instance: {0}")]
    InvalidInstance(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
