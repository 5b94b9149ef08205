//! Crate-wide error type.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Too many bytes for one field element of the chosen configuration.
    #[error("input is {got} bytes but at most {max} fit a field element")]
    ByteLength { max: usize, got: usize },

    /// The bytes encode an integer at or above the field modulus.
    #[error("byte string encodes a value at or above the field modulus")]
    NonCanonicalValue,

    /// Wrong amount of key material.
    #[error("key must be exactly {expected} bytes, got {got}")]
    KeyLength { expected: usize, got: usize },

    /// Messages must stay below 2^64 bits so the length block fits.
    #[error("message of {bits} bits exceeds the 2^64 - 1 bit limit")]
    MessageTooLong { bits: u128 },

    /// Horner group size out of range.
    #[error("group size g must be in 1..=4, got {0}")]
    InvalidGroupSize(usize),

    /// BRW leaf-order parameter out of range.
    #[error("leaf parameter t must be in 2..=5, got {0}")]
    InvalidLeafOrder(u32),

    /// Decimation stream count out of range.
    #[error("stream count c must be in 1..=8, got {0}")]
    InvalidStreamCount(usize),

    /// The packed backend decimates into exactly four streams.
    #[error("the vec4 backend requires c = 4, got {0}")]
    VectorStreamCount(usize),

    /// Toy-lab parameter set rejected.
    #[error("toy parameters rejected: {0}")]
    InvalidToyParams(String),
}
