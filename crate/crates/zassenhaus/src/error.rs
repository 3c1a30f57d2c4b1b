//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in F_{p}^{m}")]
    DivisionByZero { p: u64, m: usize },

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("{p} is not a supported prime (need a prime with 2 <= p <= 13)")]
    BadPrime { p: u64 },

    #[error("size guard exceeded: {what} = {value} > {limit}")]
    SizeGuard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("no canonical embedding F_{{{p}^{src}}} -> F_{{{p}^{dst}}}: {src} does not divide {dst}")]
    NoEmbedding { p: u64, src: usize, dst: usize },

    #[error("hypothesis {name} fails for {algebra} at p = {p}: {detail}")]
    HypothesisFailed {
        name: &'static str,
        algebra: String,
        p: u64,
        detail: String,
    },

    #[error("algebra mismatch between operands")]
    AlgebraMismatch,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("term count overflow during normal-form computation ({count} > {limit})")]
    TermOverflow { count: usize, limit: usize },

    #[error("degree bound exceeded: requested {requested}, configured bound {bound}")]
    DegreeBound { requested: usize, bound: usize },

    #[error("restriction-theorem violation: {0}")]
    RestrictionViolation(String),

    #[error("element is not invariant: {0}")]
    NotInvariant(String),

    #[error("operation not supported for this realization: {0}")]
    Unsupported(String),

    #[error("incompatible pair: {0}")]
    IncompatiblePair(String),

    #[error("element does not act as a scalar: {0}")]
    NotScalar(String),

    #[error("zero element has no leading term")]
    ZeroElement,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
