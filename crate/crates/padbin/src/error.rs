use thiserror::Error;

/// Everything that can go wrong short of a bug: bad inputs, values outside a
/// function's mathematical domain, and configured resource caps.
///
/// Mixing residues from different rings is a programming error and panics
/// instead of returning one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("value is not invertible mod {p}^{k}")]
    NonInvertible { p: u64, k: u32 },

    #[error("binomial series undefined: exponent denominator divisible by p = {p}")]
    SeriesUndefined { p: u64 },

    #[error("binomial series base must be 1 + u with p | u (p = {p})")]
    SeriesBase { p: u64 },

    #[error("fractional-exponent series needs p > k, got p = {p}, k = {k}")]
    PrecisionGuard { p: u64, k: u32 },

    #[error("working precision k = {k} does not exceed the predicted order {r}")]
    PrecisionTooSmall { k: u32, r: u64 },

    #[error("degenerate instance: {0}")]
    Degenerate(String),

    #[error("resource bound exceeded: {0}")]
    Resource(String),

    #[error("index {m} is divisible by p - 1 = {} (Bernoulli denominator pole)", p - 1)]
    IrregularCase { m: u64, p: u64 },

    #[error("claimed divisibility fails: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
