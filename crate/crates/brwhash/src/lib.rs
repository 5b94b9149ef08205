//! Polynomial and Bernstein-Rabin-Winograd universal hashing over the
//! pseudo-Mersenne primes 2^130 - 5 and 2^127 - 1.
//!
//! The crate provides three almost-XOR-universal hash families (`polyhash`,
//! `brwhash`, and the decimated `decbrw_hash`), a portable 4-lane packed
//! backend for each, a big-integer reference oracle, operation counters for
//! validating cost models, and a small-prime laboratory that measures
//! differential probabilities exhaustively.

pub mod analysis;
pub mod brw;
pub mod counters;
mod error;
pub mod field;
pub mod guide;
pub mod hash;
pub mod kat;
pub mod lanes;
pub mod oracle;
pub mod params;

pub use counters::OpCounters;
pub use error::Error;
pub use field::{BoundClass, FieldElement};
pub use params::{PrimeConfig, PrimeId, ALL_CONFIGS, P1271, P1271_R32, P1305};
