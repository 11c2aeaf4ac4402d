use num_bigint::BigInt;
use thiserror::Error;

/// Errors raised by the sequence engine, the certified numerics and the
/// proof pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// An enclosure was too wide to decide a comparison, a floor or a sign.
    /// Callers retry with at least `suggested_bits` of working precision.
    #[error("precision too low ({context}); retry with {suggested_bits} bits")]
    NeedsPrecision { context: String, suggested_bits: u32 },

    #[error("precision exhausted at {bits} bits ({context})")]
    PrecisionExhausted { context: String, bits: u32 },

    #[error("lattice basis columns are linearly dependent")]
    DependentBasis,

    /// The de Weger criterion failed; the reduction must be repeated with a
    /// larger approximation constant.
    #[error("delta^2 < T^2 + S; enlarge C to {suggested}")]
    EnlargeC { suggested: BigInt },

    #[error("continued fraction expanded only to index {reached}: {reason}")]
    Expansion { reached: usize, reason: String },

    #[error("proof step failed: {0}")]
    ProofFailed(String),

    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn needs_precision(context: impl Into<String>, current_bits: u32) -> Self {
        Error::NeedsPrecision {
            context: context.into(),
            suggested_bits: current_bits.saturating_mul(2),
        }
    }
}
