//! Arbitrary-precision reference implementations.
//!
//! Everything here is written straight from the mathematical definitions on
//! `num-bigint` integers: separate padding code, literal recursion for the
//! BRW polynomial, textbook Horner for the polynomial hash, `modpow` for key
//! powers. The limb engine is tested against these functions end to end;
//! nothing here shares arithmetic with it.
//!
//! The module also carries a dense polynomial type over small word-sized
//! primes, used to reason symbolically about the key polynomial `Q` that a
//! construction commits to (degrees, coefficients), and by the small-prime
//! analysis lab.

use crate::field::FieldElement;
use crate::params::PrimeConfig;
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// The modulus 2^m - delta.
pub fn prime(cfg: &PrimeConfig) -> BigUint {
    (BigUint::one() << cfg.m) - BigUint::from(cfg.delta)
}

/// Value of a limb element, for cross-checking the engine in tests.
pub fn fe_to_biguint(e: &FieldElement, cfg: &PrimeConfig) -> BigUint {
    let mut acc = BigUint::zero();
    for i in (0..cfg.limb_count).rev() {
        acc = (acc << cfg.limb_bits) + BigUint::from(e.limbs()[i]);
    }
    acc
}

/// Self-delimiting padding: each block is its little-endian integer plus
/// 2^s, where s is the block's bit count (so a short final block pads
/// differently from a full one and no length block is needed).
pub fn pad1_blocks(msg: &[u8], cfg: &PrimeConfig) -> Vec<BigUint> {
    let bb = cfg.block_bytes();
    msg.chunks(bb)
        .map(|chunk| {
            BigUint::from_bytes_le(chunk) + (BigUint::one() << (8 * chunk.len()))
        })
        .collect()
}

/// Raw-block padding: little-endian integers only, plus the total bit length
/// to be hashed in by the construction.
pub fn pad2_blocks(msg: &[u8], cfg: &PrimeConfig) -> (Vec<BigUint>, u64) {
    let bb = cfg.block_bytes();
    let blocks = msg.chunks(bb).map(BigUint::from_bytes_le).collect();
    (blocks, 8 * msg.len() as u64)
}

/// tau * Poly(tau; blocks) mod p, by Horner's rule.
pub fn poly_eval(tau: &BigUint, blocks: &[BigUint], p: &BigUint) -> BigUint {
    let mut acc = BigUint::zero();
    for b in blocks {
        acc = (acc + b) * tau % p;
    }
    acc
}

/// The BRW polynomial evaluated at tau, by its literal recursion.
pub fn brw_eval(tau: &BigUint, blocks: &[BigUint], p: &BigUint) -> BigUint {
    match blocks.len() {
        0 => BigUint::zero(),
        1 => blocks[0].clone() % p,
        2 => (&blocks[0] * tau + &blocks[1]) % p,
        3 => ((tau + &blocks[0]) * (tau * tau + &blocks[1]) + &blocks[2]) % p,
        l => {
            // Split at the largest power of two <= l (which is >= 4).
            let r = 1usize << floor_log2(l as u64);
            let left = brw_eval(tau, &blocks[..r - 1], p);
            let key_pow = tau.modpow(&BigUint::from(r), p);
            let right = brw_eval(tau, &blocks[r..], p);
            (left * ((key_pow + &blocks[r - 1]) % p) + right) % p
        }
    }
}

/// floor(log2(x)) for x >= 1.
pub fn floor_log2(x: u64) -> u32 {
    assert!(x >= 1);
    63 - x.leading_zeros()
}

/// tau * (tau * BRW(tau; blocks) + bit_len) mod p.
pub fn brw_hash_value(tau: &BigUint, blocks: &[BigUint], bit_len: u64, p: &BigUint) -> BigUint {
    let inner = brw_eval(tau, blocks, p);
    (tau * inner + BigUint::from(bit_len)) * tau % p
}

/// The decimated construction's value: blocks are zero-filled to c streams of
/// equal length, each stream is BRW-hashed, and the stream results are
/// combined by Horner in tau^d before the usual length wrap.
pub fn dec_brw_value(
    tau: &BigUint,
    blocks: &[BigUint],
    bit_len: u64,
    c: usize,
    p: &BigUint,
) -> BigUint {
    let ell = blocks.len();
    if ell == 0 {
        return BigUint::zero();
    }
    let n_blocks = ell.div_ceil(c);
    let mut padded = blocks.to_vec();
    padded.resize(c * n_blocks, BigUint::zero());
    let streams: Vec<BigUint> = (0..c)
        .map(|j| {
            let stream: Vec<BigUint> = (0..n_blocks).map(|i| padded[i * c + j].clone()).collect();
            brw_eval(tau, &stream, p)
        })
        .collect();
    let d = 1u64 << (floor_log2(n_blocks as u64) + 1);
    let tau_d = tau.modpow(&BigUint::from(d), p);
    let mut acc = streams[0].clone();
    for q in &streams[1..] {
        acc = (acc * &tau_d + q) % p;
    }
    (tau * acc + BigUint::from(bit_len)) * tau % p
}

/// (value mod 2^mu) as 16 little-endian bytes.
pub fn digest_bytes(value: &BigUint, mu: u32) -> [u8; 16] {
    let masked = value & ((BigUint::one() << mu) - BigUint::one());
    let raw = masked.to_bytes_le();
    let mut out = [0u8; 16];
    out[..raw.len()].copy_from_slice(&raw);
    out
}

/// Key bytes -> tau: little-endian value masked to k bits.
pub fn key_value(key: &[u8; 16], cfg: &PrimeConfig) -> BigUint {
    BigUint::from_bytes_le(key) & ((BigUint::one() << cfg.k) - BigUint::one())
}

/// One-shot polynomial hash digest.
pub fn polyhash_digest(key: &[u8; 16], msg: &[u8], cfg: &PrimeConfig) -> [u8; 16] {
    let p = prime(cfg);
    let tau = key_value(key, cfg);
    let blocks = pad1_blocks(msg, cfg);
    digest_bytes(&poly_eval(&tau, &blocks, &p), cfg.mu)
}

/// One-shot BRW hash digest.
pub fn brwhash_digest(key: &[u8; 16], msg: &[u8], cfg: &PrimeConfig) -> [u8; 16] {
    let p = prime(cfg);
    let tau = key_value(key, cfg);
    let (blocks, bit_len) = pad2_blocks(msg, cfg);
    digest_bytes(&brw_hash_value(&tau, &blocks, bit_len, &p), cfg.mu)
}

/// One-shot decimated BRW hash digest.
pub fn dec_brw_digest(key: &[u8; 16], msg: &[u8], c: usize, cfg: &PrimeConfig) -> [u8; 16] {
    let p = prime(cfg);
    let tau = key_value(key, cfg);
    let (blocks, bit_len) = pad2_blocks(msg, cfg);
    digest_bytes(&dec_brw_value(&tau, &blocks, bit_len, c, &p), cfg.mu)
}

/// Poly1305 per RFC 8439, on top of the polynomial hash: clamp r, hash the
/// message over 2^130 - 5, add s modulo 2^128.
pub fn poly1305_tag(key: &[u8; 32], msg: &[u8]) -> [u8; 16] {
    let cfg = &crate::params::P1305;
    let p = prime(cfg);
    let mut r_bytes = [0u8; 16];
    r_bytes.copy_from_slice(&key[..16]);
    for i in [3, 7, 11, 15] {
        r_bytes[i] &= 0x0f;
    }
    for i in [4, 8, 12] {
        r_bytes[i] &= 0xfc;
    }
    let r = BigUint::from_bytes_le(&r_bytes);
    let s = BigUint::from_bytes_le(&key[16..]);
    let blocks = pad1_blocks(msg, cfg);
    let acc = poly_eval(&r, &blocks, &p);
    let tag: BigUint = (acc + s) & ((BigUint::one() << 128) - BigUint::one());
    let raw = tag.to_bytes_le();
    let mut out = [0u8; 16];
    out[..raw.len()].copy_from_slice(&raw);
    out
}

/// Dense polynomial over Z_p for a small prime p, coefficients `coeffs[i]`
/// on x^i. Used to reason about the key polynomial symbolically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    pub coeffs: Vec<u64>,
    pub p: u64,
}

impl DensePoly {
    pub fn zero(p: u64) -> Self {
        DensePoly { coeffs: vec![], p }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        let mut poly = DensePoly {
            coeffs: vec![c % p],
            p,
        };
        poly.trim();
        poly
    }

    pub fn from_coeffs(coeffs: Vec<u64>, p: u64) -> Self {
        let mut poly = DensePoly {
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
            p,
        };
        poly.trim();
        poly
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &DensePoly) -> DensePoly {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        let mut out = DensePoly { coeffs, p: self.p };
        out.trim();
        out
    }

    pub fn sub(&self, other: &DensePoly) -> DensePoly {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.p + self.coeff(i) - other.coeff(i)) % self.p)
            .collect();
        let mut out = DensePoly { coeffs, p: self.p };
        out.trim();
        out
    }

    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        assert_eq!(self.p, other.p);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return DensePoly::zero(self.p);
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % self.p as u128;
            }
        }
        let mut out = DensePoly {
            coeffs: acc.into_iter().map(|c| c as u64).collect(),
            p: self.p,
        };
        out.trim();
        out
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> DensePoly {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![0u64; k];
        coeffs.extend_from_slice(&self.coeffs);
        DensePoly { coeffs, p: self.p }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.p as u128;
        let x = x as u128 % p;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c as u128) % p;
        }
        acc as u64
    }
}

/// The BRW polynomial with symbolic key: blocks are constants, x is the key.
pub fn brw_poly(blocks: &[u64], p: u64) -> DensePoly {
    let x = DensePoly::from_coeffs(vec![0, 1], p);
    match blocks.len() {
        0 => DensePoly::zero(p),
        1 => DensePoly::constant(blocks[0], p),
        2 => DensePoly::constant(blocks[0], p)
            .mul(&x)
            .add(&DensePoly::constant(blocks[1], p)),
        3 => x
            .add(&DensePoly::constant(blocks[0], p))
            .mul(&x.mul(&x).add(&DensePoly::constant(blocks[1], p)))
            .add(&DensePoly::constant(blocks[2], p)),
        l => {
            let r = 1usize << floor_log2(l as u64);
            let left = brw_poly(&blocks[..r - 1], p);
            let key_pow = x_pow(r, p).add(&DensePoly::constant(blocks[r - 1], p));
            let right = brw_poly(&blocks[r..], p);
            left.mul(&key_pow).add(&right)
        }
    }
}

fn x_pow(k: usize, p: u64) -> DensePoly {
    DensePoly::from_coeffs(vec![0, 1], p).shift(k - 1)
}

/// The key polynomial Q(x) that the decimated construction commits to:
/// Q(x) = x * (x * (Q_1 x^{d(c-1)} + ... + Q_c) + L), with Q_i the symbolic
/// BRW polynomial of stream i.
pub fn dec_q_poly(blocks: &[u64], bit_len: u64, c: usize, p: u64) -> DensePoly {
    let ell = blocks.len();
    if ell == 0 {
        return DensePoly::zero(p);
    }
    let n_blocks = ell.div_ceil(c);
    let mut padded = blocks.to_vec();
    padded.resize(c * n_blocks, 0);
    let d = 1usize << (floor_log2(n_blocks as u64) + 1);
    let mut acc = DensePoly::zero(p);
    for j in 0..c {
        let stream: Vec<u64> = (0..n_blocks).map(|i| padded[i * c + j]).collect();
        let q_j = brw_poly(&stream, p);
        acc = acc.shift(d).add(&q_j);
    }
    acc.shift(1)
        .add(&DensePoly::constant(bit_len % p, p))
        .shift(1)
}
