use thiserror::Error;

/// Errors reported by the library. Every failure is explicit; no operation
/// silently degrades to a wrong or truncated answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition text: token {token:?} at position {position}: {reason}")]
    ParsePartition {
        /// 1-based index of the offending token.
        position: usize,
        token: String,
        reason: &'static str,
    },

    #[error("partition table limit exceeded: requested p({requested}) but the table is capped at {limit}")]
    TableLimit { requested: u64, limit: u64 },

    #[error("enumeration cap exceeded: n = {n} is above the configured cap {cap}; refusing a truncated search")]
    EnumerationCap { n: u64, cap: u64 },

    #[error("n must be positive (got {n})")]
    NonPositive { n: u64 },

    #[error("base must be at least 2 (got a = {a})")]
    BaseTooSmall { a: u64 },

    #[error("ratio must be at least 1 (got lambda = {lambda})")]
    RatioTooSmall { lambda: f64 },

    #[error("logarithm of zero is undefined")]
    LogOfZero,

    #[error("e^mu overflows the working precision at mu = {mu} (n = {n})")]
    ExpOverflow { n: u64, mu: f64 },

    #[error("n = {n} has more than one maximizer; use the argmax interface")]
    TiedMaximum { n: u64 },

    #[error("offset m = {m} exceeds n = {n}")]
    OffsetTooLarge { n: u64, m: u64 },

    #[error("no sign change found for a = {a} with bracket upper bound {hi}")]
    BracketNotFound { a: u64, hi: f64 },

    #[error("threshold is defined only for 2 <= a <= 8 (got a = {a})")]
    ThresholdRange { a: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
