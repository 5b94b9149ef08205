//! Small-prime laboratory for checking differential bounds exhaustively.
//!
//! The security claims for these hash families are differential (AXU)
//! bounds over the digest group (Z_2^mu, +): for any two distinct messages
//! and any target difference alpha, the number of keys under which the
//! truncated digests differ by exactly alpha modulo 2^mu is at most a
//! small multiple of 2^(m - mu + 1). Over the production primes that can
//! only be argued, not enumerated. This module scales every parameter down
//! -- a 7-bit or 13-bit prime, bit-granular blocks, a few dozen keys -- so
//! the same constructions can be swept over *every* message pair, *every*
//! key, and *every* difference, and the observed worst-case counts
//! compared against the bounds.
//!
//! Messages here are bit strings (most significant bit first), not byte
//! strings: with block sizes this small, byte granularity would leave
//! almost nothing to enumerate. The constructions themselves are the exact
//! analogues of the production ones, and the tests cross-check these u64
//! evaluators against the arbitrary-precision oracle.

use rayon::prelude::*;

use crate::error::Error;

/// Parameters of a toy instance: modulus 2^m - delta, n-bit blocks, k-bit
/// keys, digests truncated to mu bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyParams {
    pub m: u32,
    pub delta: u64,
    pub n: u32,
    pub k: u32,
    pub mu: u32,
}

/// The 127 = 2^7 - 1 instance: 5-bit blocks, 64 keys, 6-bit digests.
pub const TOY_P127: ToyParams = ToyParams {
    m: 7,
    delta: 1,
    n: 5,
    k: 6,
    mu: 6,
};

/// The 8191 = 2^13 - 1 instance: 8-bit blocks, 2048 keys, 11-bit digests.
pub const TOY_P8191: ToyParams = ToyParams {
    m: 13,
    delta: 1,
    n: 8,
    k: 11,
    mu: 11,
};

impl ToyParams {
    pub fn modulus(&self) -> u64 {
        (1u64 << self.m) - self.delta
    }

    pub fn key_count(&self) -> u64 {
        1u64 << self.k
    }

    /// Checks that the instance is a faithful miniature: prime modulus,
    /// blocks and keys that stay below it, digests no wider than the field.
    pub fn validate(&self) -> Result<(), Error> {
        let fail = |msg: String| Err(Error::InvalidToyParams(msg));
        if self.m == 0 || self.m > 30 {
            return fail(format!("m={} outside 1..=30", self.m));
        }
        if self.delta == 0 || self.delta >= 1u64 << self.m {
            return fail(format!("delta={} leaves no modulus", self.delta));
        }
        let p = self.modulus();
        if !is_prime(p) {
            return fail(format!("2^{} - {} = {p} is not prime", self.m, self.delta));
        }
        if self.n == 0 || 1u64 << (self.n + 1) > p {
            return fail(format!("padded {}-bit blocks overflow p={p}", self.n));
        }
        if self.k == 0 || 1u64 << self.k > p {
            return fail(format!("{}-bit keys overflow p={p}", self.k));
        }
        if self.mu == 0 || self.mu > self.m {
            return fail(format!("mu={} outside 1..={}", self.mu, self.m));
        }
        Ok(())
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A message for the lab: `len` bits, most significant first, packed into
/// the low bits of `bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BitString {
    pub bits: u64,
    pub len: u32,
}

impl BitString {
    pub fn new(bits: u64, len: u32) -> Self {
        debug_assert!(len <= 63);
        debug_assert!(len == 64 || bits < 1u64 << len);
        Self { bits, len }
    }

    /// Number of n-bit blocks the string splits into.
    pub fn block_count(&self, tp: &ToyParams) -> usize {
        (self.len as usize).div_ceil(tp.n as usize)
    }
}

/// Bit-granular analogue of pad1: each chunk of s bits (s = n except
/// possibly the last) becomes 2^s + chunk.
pub fn toy_pad1_blocks(msg: BitString, tp: &ToyParams) -> Vec<u64> {
    let mut blocks = Vec::with_capacity(msg.block_count(tp));
    let mut consumed = 0;
    while consumed < msg.len {
        let s = tp.n.min(msg.len - consumed);
        let shift = msg.len - consumed - s;
        let chunk = (msg.bits >> shift) & ((1u64 << s) - 1);
        blocks.push((1u64 << s) + chunk);
        consumed += s;
    }
    blocks
}

/// Bit-granular analogue of pad2: raw chunks plus the bit length.
pub fn toy_pad2_blocks(msg: BitString, tp: &ToyParams) -> (Vec<u64>, u64) {
    let mut blocks = Vec::with_capacity(msg.block_count(tp));
    let mut consumed = 0;
    while consumed < msg.len {
        let s = tp.n.min(msg.len - consumed);
        let shift = msg.len - consumed - s;
        blocks.push((msg.bits >> shift) & ((1u64 << s) - 1));
        consumed += s;
    }
    (blocks, msg.len as u64)
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p && p < 1 << 31);
    a * b % p
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// tau * (M1 tau^(l-1) + ... + Ml) mod p, by Horner.
pub fn toy_poly_value(tau: u64, blocks: &[u64], p: u64) -> u64 {
    let mut acc = 0u64;
    for &b in blocks {
        acc = mulmod((acc + b) % p, tau, p);
    }
    acc
}

/// The BRW recursion, literally.
pub fn toy_brw_value(tau: u64, blocks: &[u64], p: u64) -> u64 {
    match blocks.len() {
        0 => 0,
        1 => blocks[0] % p,
        2 => (mulmod(blocks[0] % p, tau, p) + blocks[1]) % p,
        3 => {
            let left = (tau + blocks[0]) % p;
            let right = (mulmod(tau, tau, p) + blocks[1]) % p;
            (mulmod(left, right, p) + blocks[2]) % p
        }
        l => {
            let split = 1usize << (63 - (l as u64).leading_zeros());
            let left = toy_brw_value(tau, &blocks[..split - 1], p);
            let factor = (powmod(tau, split as u64, p) + blocks[split - 1]) % p;
            let right = toy_brw_value(tau, &blocks[split..], p);
            (mulmod(left, factor, p) + right) % p
        }
    }
}

/// (tau * BRW + L) * tau mod p.
pub fn toy_brwhash_value(tau: u64, blocks: &[u64], bit_len: u64, p: u64) -> u64 {
    let inner = (mulmod(tau, toy_brw_value(tau, blocks, p), p) + bit_len % p) % p;
    mulmod(inner, tau, p)
}

/// The c-stream decimated value, mirroring the production combine exactly.
pub fn toy_dec_value(tau: u64, blocks: &[u64], bit_len: u64, c: usize, p: u64) -> u64 {
    let ell = blocks.len();
    if ell == 0 {
        return 0;
    }
    let per_stream = ell.div_ceil(c);
    let streams: Vec<u64> = (0..c)
        .map(|s| {
            let stream: Vec<u64> = (0..per_stream)
                .map(|i| blocks.get(i * c + s).copied().unwrap_or(0))
                .collect();
            toy_brw_value(tau, &stream, p)
        })
        .collect();
    let d = 1u64 << (63 - (per_stream as u64).leading_zeros() + 1);
    let tau_d = powmod(tau, d, p);
    let mut acc = streams[0];
    for &q in &streams[1..] {
        acc = (mulmod(acc, tau_d, p) + q) % p;
    }
    mulmod((mulmod(tau, acc, p) + bit_len % p) % p, tau, p)
}

/// Which construction a sweep exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyConstruction {
    Poly,
    Brw,
    Dec { streams: usize },
}

impl ToyConstruction {
    pub fn kind_label(&self) -> &'static str {
        match self {
            ToyConstruction::Poly => "poly",
            ToyConstruction::Brw => "brw",
            ToyConstruction::Dec { .. } => "dec",
        }
    }

    pub fn stream_count(&self) -> usize {
        match self {
            ToyConstruction::Dec { streams } => *streams,
            _ => 1,
        }
    }
}

/// The truncated digest of one toy message under one key.
pub fn toy_digest(kind: ToyConstruction, tau: u64, msg: BitString, tp: &ToyParams) -> u16 {
    let p = tp.modulus();
    let value = match kind {
        ToyConstruction::Poly => toy_poly_value(tau, &toy_pad1_blocks(msg, tp), p),
        ToyConstruction::Brw => {
            let (blocks, bit_len) = toy_pad2_blocks(msg, tp);
            toy_brwhash_value(tau, &blocks, bit_len, p)
        }
        ToyConstruction::Dec { streams } => {
            let (blocks, bit_len) = toy_pad2_blocks(msg, tp);
            toy_dec_value(tau, &blocks, bit_len, streams, p)
        }
    };
    (value & ((1u64 << tp.mu) - 1)) as u16
}

/// Keys under which a pair of messages in the l-block class may produce
/// any one digest difference: the differential polynomial has at most
/// `coeff` roots, and truncation to mu bits widens each root's window by
/// 2^(m - mu + 1).
pub fn axu_bound_count(kind: ToyConstruction, ell: usize, tp: &ToyParams) -> u64 {
    let coeff = match kind {
        ToyConstruction::Poly => ell as u64,
        ToyConstruction::Brw => 2 * ell as u64 + 1,
        ToyConstruction::Dec { streams } if streams <= 1 => 2 * ell as u64 + 1,
        ToyConstruction::Dec { streams } => 2 * ell as u64 + 2 * streams as u64 + 1,
    };
    coeff << (tp.m - tp.mu + 1)
}

/// Outcome of one exhaustive class: all message pairs whose longer member
/// has `ell` blocks, all keys, all digest differences.
#[derive(Debug, Clone)]
pub struct AxuReport {
    pub kind: &'static str,
    pub ell: usize,
    pub c: usize,
    pub params: String,
    pub queries_checked: u64,
    pub max_count: u64,
    pub bound_count: u64,
    pub pass: bool,
}

/// Exhaustive AXU sweep of one construction.
///
/// Every bit string of 0..=max_bits bits is a message. For every unordered
/// pair of distinct messages, the digests under all 2^k keys are compared
/// and a histogram over the digest difference modulo 2^mu is taken; the
/// largest histogram bucket in each block-length class is the observed
/// worst case, reported against [`axu_bound_count`]. Unordered pairs
/// suffice: swapping the pair negates every difference, which permutes the
/// histogram without changing its largest bucket.
pub fn axu_sweep(
    tp: &ToyParams,
    max_bits: u32,
    kind: ToyConstruction,
) -> Result<Vec<AxuReport>, Error> {
    tp.validate()?;
    if let ToyConstruction::Dec { streams } = kind {
        if streams == 0 {
            return Err(Error::InvalidStreamCount(streams));
        }
    }
    if max_bits > 20 {
        return Err(Error::InvalidToyParams(format!(
            "max_bits={max_bits} enumerates too many strings"
        )));
    }

    let messages: Vec<BitString> = (0..=max_bits)
        .flat_map(|len| (0..(1u64 << len)).map(move |bits| BitString::new(bits, len)))
        .collect();
    let keys = tp.key_count();
    let classes = BitString::new(0, max_bits).block_count(tp).max(1);

    // Memoize every digest once: message-major, key-minor.
    let table: Vec<Vec<u16>> = messages
        .par_iter()
        .map(|&msg| (0..keys).map(|tau| toy_digest(kind, tau, msg, tp)).collect())
        .collect();
    let block_counts: Vec<usize> = messages.iter().map(|m| m.block_count(tp)).collect();

    // For each pair, histogram the digest difference across keys; track
    // the worst bucket and the pair tally per block-length class.
    let buckets = 1usize << tp.mu;
    let mask = (buckets - 1) as u16;
    let (class_max, class_pairs) = (0..messages.len())
        .into_par_iter()
        .fold(
            || (vec![0u64; classes + 1], vec![0u64; classes + 1], vec![0u32; buckets]),
            |(mut maxima, mut pairs, mut hist), i| {
                for j in i + 1..messages.len() {
                    let class = block_counts[i].max(block_counts[j]);
                    hist.fill(0);
                    for (&a, &b) in table[i].iter().zip(table[j].iter()) {
                        let diff = a.wrapping_sub(b) & mask;
                        hist[diff as usize] += 1;
                    }
                    let worst = *hist.iter().max().unwrap() as u64;
                    maxima[class] = maxima[class].max(worst);
                    pairs[class] += 1;
                }
                (maxima, pairs, hist)
            },
        )
        .map(|(maxima, pairs, _)| (maxima, pairs))
        .reduce(
            || (vec![0u64; classes + 1], vec![0u64; classes + 1]),
            |(mut ma, mut pa), (mb, pb)| {
                for (a, b) in ma.iter_mut().zip(mb) {
                    *a = (*a).max(b);
                }
                for (a, b) in pa.iter_mut().zip(pb) {
                    *a += b;
                }
                (ma, pa)
            },
        );

    let params = format!(
        "m={} delta={} n={} k={} mu={}",
        tp.m, tp.delta, tp.n, tp.k, tp.mu
    );
    Ok((1..=classes)
        .filter(|&ell| class_pairs[ell] > 0)
        .map(|ell| {
            let bound_count = axu_bound_count(kind, ell, tp);
            let max_count = class_max[ell];
            AxuReport {
                kind: kind.kind_label(),
                ell,
                c: kind.stream_count(),
                params: params.clone(),
                queries_checked: class_pairs[ell] * (1u64 << tp.mu),
                max_count,
                bound_count,
                pass: max_count <= bound_count,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_bigint::BigUint;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn built_in_instances_validate() {
        TOY_P127.validate().unwrap();
        TOY_P8191.validate().unwrap();
        assert_eq!(TOY_P127.modulus(), 127);
        assert_eq!(TOY_P8191.modulus(), 8191);
    }

    #[test]
    fn validation_rejects_broken_instances() {
        let composite = ToyParams { m: 4, delta: 1, n: 2, k: 3, mu: 3 };
        assert!(composite.validate().is_err(), "15 is not prime");
        let wide_blocks = ToyParams { n: 7, ..TOY_P127 };
        assert!(wide_blocks.validate().is_err(), "2^8 exceeds 127");
        let wide_keys = ToyParams { k: 7, ..TOY_P127 };
        assert!(wide_keys.validate().is_err(), "2^7 exceeds 127");
        let wide_digest = ToyParams { mu: 8, ..TOY_P127 };
        assert!(wide_digest.validate().is_err(), "mu wider than the field");
    }

    #[test]
    fn padding_is_msb_first_and_injective_on_small_strings() {
        let tp = &TOY_P127;
        assert!(toy_pad1_blocks(BitString::new(0, 0), tp).is_empty());
        // 0b101 (3 bits) -> one block 2^3 + 5.
        assert_eq!(toy_pad1_blocks(BitString::new(0b101, 3), tp), vec![13]);
        // 7 bits split 5 + 2, first chunk from the high end.
        let msg = BitString::new(0b1100101, 7);
        assert_eq!(
            toy_pad1_blocks(msg, tp),
            vec![(1 << 5) + 0b11001, (1 << 2) + 0b01]
        );
        let (raw, bit_len) = toy_pad2_blocks(msg, tp);
        assert_eq!(raw, vec![0b11001, 0b01]);
        assert_eq!(bit_len, 7);

        // pad1 is injective across every string up to 10 bits.
        let mut seen = std::collections::HashSet::new();
        for len in 0..=10u32 {
            for bits in 0..(1u64 << len) {
                let blocks = toy_pad1_blocks(BitString::new(bits, len), tp);
                assert!(seen.insert(blocks), "collision at len {len} bits {bits:b}");
            }
        }
    }

    #[test]
    fn toy_evaluators_match_the_arbitrary_precision_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(0xa8a_0001);
        for tp in [TOY_P127, TOY_P8191] {
            let p = tp.modulus();
            let big_p = BigUint::from(p);
            for _ in 0..400 {
                let len = rng.gen_range(0..=3 * tp.n);
                let bits = if len == 0 { 0 } else { rng.gen_range(0..(1u64 << len)) };
                let msg = BitString::new(bits, len);
                let tau = rng.gen_range(0..tp.key_count());
                let big_tau = BigUint::from(tau);

                let pad1 = toy_pad1_blocks(msg, &tp);
                let big1: Vec<BigUint> = pad1.iter().map(|&b| BigUint::from(b)).collect();
                assert_eq!(
                    BigUint::from(toy_poly_value(tau, &pad1, p)),
                    oracle::poly_eval(&big_tau, &big1, &big_p)
                );

                let (pad2, bit_len) = toy_pad2_blocks(msg, &tp);
                let big2: Vec<BigUint> = pad2.iter().map(|&b| BigUint::from(b)).collect();
                assert_eq!(
                    BigUint::from(toy_brw_value(tau, &pad2, p)),
                    oracle::brw_eval(&big_tau, &big2, &big_p)
                );
                assert_eq!(
                    BigUint::from(toy_brwhash_value(tau, &pad2, bit_len, p)),
                    oracle::brw_hash_value(&big_tau, &big2, bit_len, &big_p)
                );
                for c in 1..=5 {
                    let got = BigUint::from(toy_dec_value(tau, &pad2, bit_len, c, p));
                    let expect = oracle::dec_brw_value(&big_tau, &big2, bit_len, c, &big_p);
                    if pad2.is_empty() {
                        assert!(got.is_zero() && expect.is_zero());
                    } else {
                        assert_eq!(got, expect, "c={c} len={len}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_sweep_passes_and_is_deterministic() {
        let reports = axu_sweep(&TOY_P127, 6, ToyConstruction::Poly).unwrap();
        assert!(!reports.is_empty());
        for report in &reports {
            assert!(report.pass, "ell {}: {} > {}", report.ell, report.max_count, report.bound_count);
            assert!(report.queries_checked > 0);
        }
        let again = axu_sweep(&TOY_P127, 6, ToyConstruction::Poly).unwrap();
        assert_eq!(reports.len(), again.len());
        for (a, b) in reports.iter().zip(&again) {
            assert_eq!(a.max_count, b.max_count);
            assert_eq!(a.queries_checked, b.queries_checked);
        }
    }

    #[test]
    fn bound_counts_scale_with_length_and_streams() {
        assert_eq!(axu_bound_count(ToyConstruction::Poly, 2, &TOY_P127), 8);
        assert_eq!(axu_bound_count(ToyConstruction::Brw, 2, &TOY_P127), 20);
        assert_eq!(
            axu_bound_count(ToyConstruction::Dec { streams: 2 }, 2, &TOY_P127),
            36
        );
        assert_eq!(
            axu_bound_count(ToyConstruction::Dec { streams: 1 }, 3, &TOY_P127),
            28
        );
    }
}
