use thiserror::Error;

/// Errors produced by the trace library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid flux {p}/{q}: denominator must be positive")]
    InvalidFlux { p: i64, q: i64 },

    #[error("invalid coupling lambda = {0}: must be positive and finite")]
    InvalidCoupling(f64),

    #[error("partition term has no parts; multinomial weight is undefined")]
    DegenerateTerm,

    #[error("building-block index {k} out of range 0..{q}")]
    IndexError { k: u64, q: u64 },

    #[error("polynomial has a zero leading coefficient")]
    DegeneratePolynomial,

    #[error("argument outside the domain of {function}: {value}")]
    DomainError { function: &'static str, value: f64 },

    #[error("|s| = {s} exceeds the spectral range {limit}")]
    RangeError { s: f64, limit: f64 },

    #[error("walk length {n} exceeds the configured cap {cap}")]
    TooLarge { n: u32, cap: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
