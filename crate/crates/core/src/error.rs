use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid discriminant parameter d={0}: must be negative and squarefree")]
    BadField(i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("empty or all-zero generator list")]
    ZeroIdeal,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("moduli are not pairwise coprime")]
    NotCoprime,
    #[error("ideal is not integral")]
    NotIntegral,
    #[error("element is zero")]
    Zero,
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("{0}")]
    Domain(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
