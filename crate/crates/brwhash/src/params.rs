//! Parameter sets for the supported pseudo-Mersenne primes.

/// Which prime the arithmetic works over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrimeId {
    /// p = 2^130 - 5, the Poly1305 prime.
    P1305,
    /// p = 2^127 - 1, the eighth Mersenne prime.
    P1271,
}

/// A full parameter set: prime shape, block/key/digest widths, and the limb
/// representation the arithmetic uses.
///
/// Two representations are provided for 2^127 - 1. Five 26-bit limbs mirror
/// the 2^130 - 5 layout and leave the same carry headroom in 64-bit
/// accumulators; four 32-bit limbs shrink key tables by a fifth but force the
/// multiplier to split every 64-bit partial product (see `field`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeConfig {
    pub prime_id: PrimeId,
    /// p = 2^m - delta.
    pub m: u32,
    /// p = 2^m - delta.
    pub delta: u64,
    /// Message block size in bits. Blocks are n/8 whole bytes.
    pub n: u32,
    /// Key size in bits. Keys are read from 16 bytes and masked to k bits.
    pub k: u32,
    /// Digest size in bits. Digests are (x mod p) mod 2^mu, carried in 16
    /// bytes with any bits at or above mu held at zero.
    pub mu: u32,
    /// Live limbs per element; limbs beyond this are always zero.
    pub limb_count: usize,
    /// Nominal digit width of a limb.
    pub limb_bits: u32,
    /// 2^(limb_count * limb_bits) mod p: the weight picked up by product
    /// terms that spill past the top limb in the schoolbook multiplier.
    pub fold_constant: u64,
}

impl PrimeConfig {
    /// Whole bytes per message block.
    pub fn block_bytes(&self) -> usize {
        (self.n / 8) as usize
    }

    /// Digest width in bytes (always 16; high bits zero when mu < 128).
    pub fn digest_bytes(&self) -> usize {
        16
    }

    /// Key material width in bytes (always 16; masked to k bits).
    pub fn key_bytes(&self) -> usize {
        16
    }
}

/// 2^130 - 5 with 128-bit blocks: five 26-bit limbs.
pub const P1305: PrimeConfig = PrimeConfig {
    prime_id: PrimeId::P1305,
    m: 130,
    delta: 5,
    n: 128,
    k: 128,
    mu: 128,
    limb_count: 5,
    limb_bits: 26,
    fold_constant: 5,
};

/// 2^127 - 1 with 120-bit blocks: five 26-bit limbs.
pub const P1271: PrimeConfig = PrimeConfig {
    prime_id: PrimeId::P1271,
    m: 127,
    delta: 1,
    n: 120,
    k: 126,
    mu: 126,
    limb_count: 5,
    limb_bits: 26,
    fold_constant: 8,
};

/// 2^127 - 1 with 120-bit blocks: four 32-bit limbs.
pub const P1271_R32: PrimeConfig = PrimeConfig {
    prime_id: PrimeId::P1271,
    m: 127,
    delta: 1,
    n: 120,
    k: 126,
    mu: 126,
    limb_count: 4,
    limb_bits: 32,
    fold_constant: 2,
};

/// All built-in configurations, handy for exhaustive tests.
pub const ALL_CONFIGS: [&PrimeConfig; 3] = [&P1305, &P1271, &P1271_R32];
