//! Scalar arithmetic in GF(2^130 - 5) and GF(2^127 - 1) on unsaturated limbs.
//!
//! Elements live in 64-bit limbs holding 26-bit digits (or 32-bit digits for
//! the four-limb 2^127 - 1 layout), so a whole schoolbook product accumulates
//! in the limbs of one element without intermediate carries. Reduction is
//! lazy: multiplication only needs its operands inside a documented limb
//! envelope, `partial_reduce` squeezes limbs back near the digit width
//! without computing the canonical representative, and `full_reduce` produces
//! the unique canonical form for digest extraction.
//!
//! The envelope bookkeeping that makes the laziness sound:
//!
//! * canonical elements have strictly positional digits and value < p;
//! * partially reduced elements keep every limb within a documented slack of
//!   the digit width (see `partial_reduce`), so the sum of a partially
//!   reduced element and a canonical one still has 26-bit-limb configurations
//!   under 2^27 + 2^15 per limb;
//! * one schoolbook product of such operands then stays below 2^58.4 per
//!   limb, and the evaluation trees in this crate add at most 24 products
//!   before reducing, comfortably clear of u64 (64 products fit: the
//!   `unreduced_add` debug assertions check every addition).

// Limb kernels walk several fixed-size arrays in lockstep, with offsets;
// indexed loops are the clearer form here.
#![allow(clippy::needless_range_loop)]

use crate::error::Error;
use crate::params::{PrimeConfig, PrimeId};

const M26: u64 = (1 << 26) - 1;
const M23: u64 = (1 << 23) - 1;
const M32: u64 = (1 << 32) - 1;
const M31: u64 = (1 << 31) - 1;

/// How far an element's limbs may stray from the canonical range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoundClass {
    /// Strictly positional digits, value < p.
    Canonical,
    /// Limbs within the per-configuration slack documented on
    /// [`partial_reduce`]; value below a small multiple of p.
    PartiallyReduced,
    /// Raw accumulator limbs, bounded only by u64.
    Unreduced,
}

/// A field element in `cfg.limb_count` unsaturated 64-bit limbs, least
/// significant first. Limb i carries weight 2^(i * cfg.limb_bits); limbs at
/// or beyond `limb_count` are always zero.
///
/// The `bound` tag is advisory metadata checked by debug assertions. It never
/// affects values, so release builds carry it for free and tests can catch a
/// path that multiplies an accumulator it forgot to reduce.
#[derive(Debug, Clone, Copy)]
pub struct FieldElement {
    limbs: [u64; 5],
    bound: BoundClass,
}

impl FieldElement {
    /// Builds an element from raw limbs, trusting the caller's bound class.
    ///
    /// Intended for tests probing the arithmetic at its documented envelope;
    /// the hashing paths never need it.
    pub fn from_raw_parts(limbs: [u64; 5], bound: BoundClass) -> Self {
        FieldElement { limbs, bound }
    }

    pub fn limbs(&self) -> [u64; 5] {
        self.limbs
    }

    pub fn bound(&self) -> BoundClass {
        self.bound
    }

    pub fn is_zero_limbs(&self) -> bool {
        self.limbs == [0; 5]
    }
}

/// The additive identity (canonical).
pub fn fe_zero() -> FieldElement {
    FieldElement {
        limbs: [0; 5],
        bound: BoundClass::Canonical,
    }
}

/// The multiplicative identity (canonical).
pub fn fe_one(cfg: &PrimeConfig) -> FieldElement {
    fe_from_u64(1, cfg)
}

/// Embeds a machine word. Always canonical: 2^64 is far below either prime.
pub fn fe_from_u64(x: u64, cfg: &PrimeConfig) -> FieldElement {
    let mask = (1u64 << cfg.limb_bits) - 1;
    let mut limbs = [0u64; 5];
    let mut rest = x;
    let mut i = 0;
    while rest != 0 {
        limbs[i] = rest & mask;
        rest >>= cfg.limb_bits;
        i += 1;
    }
    FieldElement {
        limbs,
        bound: BoundClass::Canonical,
    }
}

/// Parses a little-endian byte string into a canonical element.
///
/// Accepts up to ceil(limb_count * limb_bits / 8) bytes (17 for the 26-bit
/// configurations, 16 for the 32-bit one). Rejects encodings whose value is
/// at or above the modulus, so every successful parse is canonical.
pub fn fe_from_le_bytes(bytes: &[u8], cfg: &PrimeConfig) -> Result<FieldElement, Error> {
    let capacity_bits = cfg.limb_count as u32 * cfg.limb_bits;
    let max = capacity_bits.div_ceil(8) as usize;
    if bytes.len() > max {
        return Err(Error::ByteLength {
            max,
            got: bytes.len(),
        });
    }
    let mut buf = [0u8; 24];
    buf[..bytes.len()].copy_from_slice(bytes);
    if !capacity_bits.is_multiple_of(8) && bytes.len() == max {
        // Bits at or above the limb capacity cannot be represented.
        if buf[max - 1] >> (capacity_bits % 8) != 0 {
            return Err(Error::NonCanonicalValue);
        }
    }
    let mut limbs = [0u64; 5];
    let mask = (1u64 << cfg.limb_bits) - 1;
    for (i, limb) in limbs.iter_mut().take(cfg.limb_count).enumerate() {
        let bit = i as u32 * cfg.limb_bits;
        let w = u64::from_le_bytes(buf[(bit / 8) as usize..][..8].try_into().unwrap());
        *limb = (w >> (bit % 8)) & mask;
    }
    if ge_p(&limbs, cfg) {
        return Err(Error::NonCanonicalValue);
    }
    Ok(FieldElement {
        limbs,
        bound: BoundClass::Canonical,
    })
}

/// True when positional digits `h` encode a value >= p.
///
/// Adds delta with a full carry chain; the sum reaches bit m exactly when the
/// value was at least 2^m - delta.
fn ge_p(h: &[u64; 5], cfg: &PrimeConfig) -> bool {
    let mut g = *h;
    g[0] += cfg.delta;
    let mask = (1u64 << cfg.limb_bits) - 1;
    for i in 0..cfg.limb_count - 1 {
        let c = g[i] >> cfg.limb_bits;
        g[i] &= mask;
        g[i + 1] += c;
    }
    let top_bits = cfg.m - (cfg.limb_count as u32 - 1) * cfg.limb_bits;
    g[cfg.limb_count - 1] >> top_bits != 0
}

/// Serializes the low mu bits of a canonical element as 16 little-endian
/// bytes. This is the digest map x -> (x mod p) mod 2^mu.
pub fn digest_mod_2mu(e: &FieldElement, cfg: &PrimeConfig) -> [u8; 16] {
    debug_assert_eq!(e.bound, BoundClass::Canonical);
    debug_assert_limbs(e, cfg);
    let mut out = [0u8; 17];
    let mut acc: u64 = 0;
    let mut acc_bits: u32 = 0;
    let mut oi = 0;
    for i in 0..cfg.limb_count {
        acc |= e.limbs[i] << acc_bits;
        acc_bits += cfg.limb_bits;
        while acc_bits >= 8 {
            out[oi] = acc as u8;
            oi += 1;
            acc >>= 8;
            acc_bits -= 8;
        }
    }
    if acc_bits > 0 {
        out[oi] = acc as u8;
    }
    let mut digest: [u8; 16] = out[..16].try_into().unwrap();
    if cfg.mu < 128 {
        // Keep mu mod 8 low bits of the top byte; mu >= 120 for all configs.
        digest[15] &= (1u8 << (cfg.mu - 120)) - 1;
    }
    digest
}

/// Limb-wise sum, left unreduced.
///
/// Debug builds verify no limb overflows u64; the envelope analysis in the
/// module docs is what guarantees it for the built-in evaluation trees.
pub fn unreduced_add(a: &FieldElement, b: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    let mut limbs = [0u64; 5];
    for i in 0..cfg.limb_count {
        limbs[i] = a.limbs[i]
            .checked_add(b.limbs[i])
            .expect("unreduced_add limb overflow: accumulation exceeded the documented envelope");
    }
    FieldElement {
        limbs,
        bound: BoundClass::Unreduced,
    }
}

/// Key-power limbs 1.. pre-scaled by the fold constant, so products with a
/// fixed operand skip the scale-by-fold multiplications of the 26-bit
/// schedules (limb_count^2 digit products instead of limb_count^2 + 4).
///
/// The 32-bit configuration gains nothing from the idea: a pre-doubled limb
/// can reach 2^33, and a 33x32-bit digit product no longer fits u64 inside
/// the split-product schedule. Its products with a tilde operand simply run
/// the plain schedule, bit for bit the same result.
#[derive(Debug, Clone, Copy)]
pub struct TildeElement {
    scaled: [u64; 4],
}

impl TildeElement {
    pub fn scaled(&self) -> [u64; 4] {
        self.scaled
    }
}

/// Pre-scales limbs 1..limb_count of `e` by the fold constant.
pub fn precompute_tilde(e: &FieldElement, cfg: &PrimeConfig) -> TildeElement {
    debug_assert!(e.bound <= BoundClass::PartiallyReduced);
    let mut scaled = [0u64; 4];
    for i in 0..cfg.limb_count - 1 {
        scaled[i] = cfg.fold_constant * e.limbs[i + 1];
    }
    TildeElement { scaled }
}

/// Schoolbook product with the high digit products folded back by FOLD.
///
/// For operands bounded by 2^27 + 2^15 per limb (the worst sum of a partially
/// reduced element and a canonical one), every output limb stays below
/// 21 * 2^54.1 < 2^58.5 for FOLD = 5 and below 2^59.3 for FOLD = 8 with the
/// short 23/24-bit top limbs of 2^127 - 1, so dozens of products can be
/// accumulated before reducing.
#[inline(always)]
fn mul5<const FOLD: u64>(e: &[u64; 5], f: &[u64; 5]) -> [u64; 5] {
    let s1 = FOLD * e[1];
    let s2 = FOLD * e[2];
    let s3 = FOLD * e[3];
    let s4 = FOLD * e[4];
    [
        e[0] * f[0] + s1 * f[4] + s2 * f[3] + s3 * f[2] + s4 * f[1],
        e[0] * f[1] + e[1] * f[0] + s2 * f[4] + s3 * f[3] + s4 * f[2],
        e[0] * f[2] + e[1] * f[1] + e[2] * f[0] + s3 * f[4] + s4 * f[3],
        e[0] * f[3] + e[1] * f[2] + e[2] * f[1] + e[3] * f[0] + s4 * f[4],
        e[0] * f[4] + e[1] * f[3] + e[2] * f[2] + e[3] * f[1] + e[4] * f[0],
    ]
}

/// `mul5` with the scaled limbs of `e` supplied ready-made.
#[inline(always)]
fn mul5_tilde(e0: u64, s: &[u64; 4], e: &[u64; 5], f: &[u64; 5]) -> [u64; 5] {
    [
        e0 * f[0] + s[0] * f[4] + s[1] * f[3] + s[2] * f[2] + s[3] * f[1],
        e0 * f[1] + e[1] * f[0] + s[1] * f[4] + s[2] * f[3] + s[3] * f[2],
        e0 * f[2] + e[1] * f[1] + e[2] * f[0] + s[2] * f[4] + s[3] * f[3],
        e0 * f[3] + e[1] * f[2] + e[2] * f[1] + e[3] * f[0] + s[3] * f[4],
        e0 * f[4] + e[1] * f[3] + e[2] * f[2] + e[3] * f[1] + e[4] * f[0],
    ]
}

/// Dedicated squaring: 15 digit products instead of 25.
#[inline(always)]
fn square5<const FOLD: u64>(e: &[u64; 5]) -> [u64; 5] {
    let d0 = 2 * e[0];
    let d1 = 2 * e[1];
    let d2 = 2 * e[2];
    let d3 = 2 * e[3];
    [
        e[0] * e[0] + FOLD * (d1 * e[4] + d2 * e[3]),
        d0 * e[1] + FOLD * (d2 * e[4] + e[3] * e[3]),
        d0 * e[2] + e[1] * e[1] + FOLD * (d3 * e[4]),
        d0 * e[3] + d1 * e[2] + FOLD * (e[4] * e[4]),
        d0 * e[4] + d1 * e[3] + e[2] * e[2],
    ]
}

/// Carries limbs of the 32-bit layout back under 2^32.
///
/// Folds the top limb at bit 31 first (2^127 = 1 in this field), so the
/// final carry into limb 3 lands on a 31-bit value and cannot push it past
/// 2^32. Value mod p is preserved. Safe for limbs up to 2^62.
#[inline(always)]
fn carry4(h: &mut [u64; 5]) {
    debug_assert!(h.iter().all(|&x| x <= 1 << 62));
    let c = h[3] >> 31;
    h[3] &= M31;
    h[0] += c;
    let c = h[0] >> 32;
    h[0] &= M32;
    h[1] += c;
    let c = h[1] >> 32;
    h[1] &= M32;
    h[2] += c;
    let c = h[2] >> 32;
    h[2] &= M32;
    h[3] += c;
}

/// Product in the 32-bit layout.
///
/// Operand digits must sit below 2^32, so operands still tagged `Unreduced`
/// (sums of a key power and a message block reach 2^33) get a value-
/// preserving carry pass first. Each 64-bit digit product u + 2^32 v is then
/// split and the halves accumulated at their own weights, with weights >= 4
/// folded by 2^128 = 2:
///
///   h0 = u00           + 2*(u13+u22+u31 + v03+v12+v21+v30)
///   h1 = u01+u10 + v00 + 2*(u23+u32     + v13+v22+v31)
///   h2 = u02+u11+u20 + v01+v10 + 2*(u33 + v23+v32)
///   h3 = u03+u12+u21+u30 + v02+v11+v20  + 2*v33
///
/// At most 15 halves (each < 2^32) with coefficient <= 2 land on one limb,
/// so outputs stay below 2^36: room for 2^26 products in an accumulator.
#[inline(always)]
fn mul4(e: &[u64; 5], f: &[u64; 5], e_unreduced: bool, f_unreduced: bool) -> [u64; 5] {
    let mut ee = *e;
    let mut ff = *f;
    if e_unreduced {
        carry4(&mut ee);
    }
    if f_unreduced {
        carry4(&mut ff);
    }
    debug_assert!(ee[..4].iter().all(|&x| x < 1 << 32));
    debug_assert!(ff[..4].iter().all(|&x| x < 1 << 32));
    let mut u = [0u64; 7];
    let mut v = [0u64; 7];
    for i in 0..4 {
        for j in 0..4 {
            let p = ee[i] * ff[j];
            u[i + j] += p & M32;
            v[i + j] += p >> 32;
        }
    }
    // v[t] carries weight 2^(32(t+1)); fold weights 4..=7 by 2.
    [
        u[0] + 2 * (u[4] + v[3]),
        u[1] + v[0] + 2 * (u[5] + v[4]),
        u[2] + v[1] + 2 * (u[6] + v[5]),
        u[3] + v[2] + 2 * v[6],
        0,
    ]
}

fn debug_assert_mul_operand(e: &FieldElement, cfg: &PrimeConfig) {
    if cfg.limb_count == 5 {
        // Reduced operands stay below 2^26 + 2^15; a key power plus a block
        // below 2^27 + 2^15. Assert a loose uniform cap.
        debug_assert!(
            e.limbs.iter().all(|&x| x < (1 << 27) + (1 << 16)),
            "multiplication operand outside the 26-bit envelope: {:?}",
            e.limbs
        );
    } else {
        // carry4 narrows anything below 2^62.
        debug_assert!(
            e.limbs[..4].iter().all(|&x| x <= 1 << 62),
            "multiplication operand outside the 32-bit envelope: {:?}",
            e.limbs
        );
        debug_assert_eq!(e.limbs[4], 0);
    }
}

fn debug_assert_limbs(e: &FieldElement, cfg: &PrimeConfig) {
    for i in cfg.limb_count..5 {
        debug_assert_eq!(e.limbs[i], 0, "dead limb is nonzero");
    }
    if e.bound == BoundClass::Canonical {
        let db = digit_bits(cfg);
        for i in 0..cfg.limb_count {
            debug_assert!(
                e.limbs[i] < 1 << db[i],
                "canonical element with oversized digit {}: {:?}",
                i,
                e.limbs
            );
        }
    }
}

/// Strict digit widths of the canonical form.
fn digit_bits(cfg: &PrimeConfig) -> [u32; 5] {
    match (cfg.prime_id, cfg.limb_count) {
        (PrimeId::P1305, 5) => [26, 26, 26, 26, 26],
        (PrimeId::P1271, 5) => [26, 26, 26, 26, 23],
        (PrimeId::P1271, 4) => [32, 32, 32, 31, 0],
        _ => unreachable!("unsupported configuration"),
    }
}

/// Schoolbook product of two (near-)reduced elements, left unreduced.
///
/// Operands may be canonical, partially reduced, or limb-wise sums of such
/// elements; debug builds assert the per-configuration envelope.
pub fn unreduced_mult(e: &FieldElement, f: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    debug_assert_mul_operand(e, cfg);
    debug_assert_mul_operand(f, cfg);
    let limbs = kernels::mul_limbs(
        cfg,
        &e.limbs,
        &f.limbs,
        e.bound == BoundClass::Unreduced,
        f.bound == BoundClass::Unreduced,
    );
    FieldElement {
        limbs,
        bound: BoundClass::Unreduced,
    }
}

/// `unreduced_mult` with the fold-scaled limbs of `e` precomputed.
///
/// Bit-identical to the plain product: the scaled limbs replace the
/// multiply-by-fold terms of the 26-bit schedules exactly, and the 32-bit
/// schedule ignores the table (see [`TildeElement`]).
pub fn unreduced_mult_tilde(
    e: &FieldElement,
    e_tilde: &TildeElement,
    f: &FieldElement,
    cfg: &PrimeConfig,
) -> FieldElement {
    debug_assert_mul_operand(e, cfg);
    debug_assert_mul_operand(f, cfg);
    #[cfg(debug_assertions)]
    for i in 0..cfg.limb_count - 1 {
        debug_assert_eq!(e_tilde.scaled[i], cfg.fold_constant * e.limbs[i + 1]);
    }
    let limbs = kernels::mul_limbs_tilde(
        cfg,
        &e.limbs,
        &e_tilde.scaled,
        &f.limbs,
        e.bound == BoundClass::Unreduced,
        f.bound == BoundClass::Unreduced,
    );
    FieldElement {
        limbs,
        bound: BoundClass::Unreduced,
    }
}

/// Squares a (near-)reduced element, left unreduced.
pub fn unreduced_square(e: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    debug_assert_mul_operand(e, cfg);
    let limbs = kernels::square_limbs(cfg, &e.limbs, e.bound == BoundClass::Unreduced);
    FieldElement {
        limbs,
        bound: BoundClass::Unreduced,
    }
}



pub(crate) mod kernels {
    //! Raw limb kernels shared with the packed-lane backend, so the scalar
    //! and lane paths are the same arithmetic by construction.
    use super::{carry4, mul5, mul5_tilde, square5, M23, M26, M31, M32};
    use crate::params::{PrimeConfig, PrimeId};

    /// The `*_wide` flags say whether the operand may exceed the digit
    /// bounds of the 32-bit layout and needs a narrowing carry pass; the
    /// 26-bit layouts never narrow and ignore them. Passing the same flag a
    /// scalar caller would pass keeps the two backends bit-identical.
    #[inline(always)]
    pub(crate) fn mul_limbs(
        cfg: &PrimeConfig,
        e: &[u64; 5],
        f: &[u64; 5],
        e_wide: bool,
        f_wide: bool,
    ) -> [u64; 5] {
        match (cfg.prime_id, cfg.limb_count) {
            (PrimeId::P1305, 5) => mul5::<5>(e, f),
            (PrimeId::P1271, 5) => mul5::<8>(e, f),
            (PrimeId::P1271, 4) => super::mul4(e, f, e_wide, f_wide),
            _ => unreachable!(),
        }
    }

    #[inline(always)]
    pub(crate) fn mul_limbs_tilde(
        cfg: &PrimeConfig,
        e: &[u64; 5],
        scaled: &[u64; 4],
        f: &[u64; 5],
        e_wide: bool,
        f_wide: bool,
    ) -> [u64; 5] {
        match (cfg.prime_id, cfg.limb_count) {
            (PrimeId::P1305, 5) | (PrimeId::P1271, 5) => mul5_tilde(e[0], scaled, e, f),
            (PrimeId::P1271, 4) => super::mul4(e, f, e_wide, f_wide),
            _ => unreachable!(),
        }
    }

    #[inline(always)]
    pub(crate) fn square_limbs(cfg: &PrimeConfig, e: &[u64; 5], e_wide: bool) -> [u64; 5] {
        match (cfg.prime_id, cfg.limb_count) {
            (PrimeId::P1305, 5) => square5::<5>(e),
            (PrimeId::P1271, 5) => square5::<8>(e),
            (PrimeId::P1271, 4) => super::mul4(e, e, e_wide, e_wide),
            _ => unreachable!(),
        }
    }

    /// One partial-reduction carry chain. See [`super::partial_reduce`] for
    /// the output bounds; inputs may have limbs up to 2^63 - 1 (2^62 for the
    /// 32-bit layout).
    #[inline(always)]
    pub(crate) fn partial_reduce_limbs(cfg: &PrimeConfig, h: &mut [u64; 5]) {
        match (cfg.prime_id, cfg.limb_count) {
            (PrimeId::P1305, 5) => {
                // Classic 2^130 - 5 chain: one full pass, fold at bit 26 of
                // the top limb with weight 5, and one settling carry. With
                // inputs below 2^63 every carry here is at most 2^38 and the
                // fold term 5c at most 2^40, so no step overflows. The final
                // carry into limb 1 is at most 2^14.
                let c = h[0] >> 26;
                h[0] &= M26;
                h[1] += c;
                let c = h[1] >> 26;
                h[1] &= M26;
                h[2] += c;
                let c = h[2] >> 26;
                h[2] &= M26;
                h[3] += c;
                let c = h[3] >> 26;
                h[3] &= M26;
                h[4] += c;
                let c = h[4] >> 26;
                h[4] &= M26;
                h[0] += 5 * c;
                let c = h[0] >> 26;
                h[0] &= M26;
                h[1] += c;
            }
            (PrimeId::P1271, 5) => {
                // Mersenne fold: 2^127 = 1, so the top limb folds at bit 23
                // with weight 1. Folding first lets the single full pass end
                // on a 23-bit limb 4, whose second fold carry (at most 2^15)
                // settles into the already-masked limb 0.
                let c = h[4] >> 23;
                h[4] &= M23;
                h[0] += c;
                let c = h[0] >> 26;
                h[0] &= M26;
                h[1] += c;
                let c = h[1] >> 26;
                h[1] &= M26;
                h[2] += c;
                let c = h[2] >> 26;
                h[2] &= M26;
                h[3] += c;
                let c = h[3] >> 26;
                h[3] &= M26;
                h[4] += c;
                let c = h[4] >> 23;
                h[4] &= M23;
                h[0] += c;
            }
            (PrimeId::P1271, 4) => {
                let mut t = [h[0], h[1], h[2], h[3], 0];
                carry4(&mut t);
                *h = t;
            }
            _ => unreachable!(),
        }
    }

    /// Full settle-and-subtract reduction to the canonical form.
    ///
    /// Repeats value-preserving carry passes until all digits are strictly
    /// positional (at most a handful of passes even from raw 2^63 limbs),
    /// then conditionally subtracts p once: g = h + delta carried out; if g
    /// reached bit m then h >= p and g with that bit cleared is h - p.
    pub(crate) fn full_reduce_limbs(cfg: &PrimeConfig, h: &mut [u64; 5]) {
        let db = super::digit_bits(cfg);
        let lc = cfg.limb_count;
        let fold_mult = if cfg.prime_id == PrimeId::P1305 { 5 } else { 1 };
        loop {
            for i in 0..lc - 1 {
                let c = h[i] >> db[i];
                h[i] &= (1 << db[i]) - 1;
                h[i + 1] += c;
            }
            let c = h[lc - 1] >> db[lc - 1];
            h[lc - 1] &= (1 << db[lc - 1]) - 1;
            if c == 0 {
                break;
            }
            h[0] += fold_mult * c;
        }
        // h is now strictly positional with value < 2^m.
        let mut g = *h;
        g[0] += cfg.delta;
        for i in 0..lc - 1 {
            let c = g[i] >> db[i];
            g[i] &= (1 << db[i]) - 1;
            g[i + 1] += c;
        }
        if g[lc - 1] >> db[lc - 1] != 0 {
            g[lc - 1] &= (1 << db[lc - 1]) - 1;
            *h = g;
        }
    }

    /// Digit masks, exported for the packed layout checks.
    #[allow(dead_code)]
    pub(crate) fn digit_masks() -> (u64, u64, u64, u64) {
        (M26, M23, M32, M31)
    }
}

/// One carry chain bringing accumulated limbs back near the digit width.
/// Value mod p is preserved; the representative generally is not canonical.
///
/// Output bounds (debug-asserted):
///
/// * 2^130 - 5: limb 1 < 2^26 + 2^14, others < 2^26;
/// * 2^127 - 1, five limbs: limb 0 < 2^26 + 2^15, limbs 1..3 < 2^26,
///   limb 4 < 2^23;
/// * 2^127 - 1, four limbs: limbs 0..2 < 2^32, limb 3 < 2^31 + 2^31.
///
/// Accepts limbs up to 2^63 - 1 (2^62 for the 32-bit layout).
pub fn partial_reduce(e: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    let mut limbs = e.limbs;
    kernels::partial_reduce_limbs(cfg, &mut limbs);
    debug_assert_partial_bounds(&limbs, cfg);
    FieldElement {
        limbs,
        bound: BoundClass::PartiallyReduced,
    }
}

fn debug_assert_partial_bounds(h: &[u64; 5], cfg: &PrimeConfig) {
    match (cfg.prime_id, cfg.limb_count) {
        (PrimeId::P1305, 5) => {
            debug_assert!(h[0] < 1 << 26);
            debug_assert!(h[1] < (1 << 26) + (1 << 14));
            debug_assert!(h[2] < 1 << 26 && h[3] < 1 << 26 && h[4] < 1 << 26);
        }
        (PrimeId::P1271, 5) => {
            debug_assert!(h[0] < (1 << 26) + (1 << 15));
            debug_assert!(h[1] < 1 << 26 && h[2] < 1 << 26 && h[3] < 1 << 26);
            debug_assert!(h[4] < 1 << 23);
        }
        (PrimeId::P1271, 4) => {
            debug_assert!(h[0] < 1 << 32 && h[1] < 1 << 32 && h[2] < 1 << 32);
            debug_assert!(h[3] < 1 << 32);
        }
        _ => unreachable!(),
    }
}

/// Reduces to the unique canonical representative.
pub fn full_reduce(e: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    let mut limbs = e.limbs;
    kernels::full_reduce_limbs(cfg, &mut limbs);
    let out = FieldElement {
        limbs,
        bound: BoundClass::Canonical,
    };
    debug_assert_limbs(&out, cfg);
    out
}

/// Multiply and partially reduce in one step.
pub fn fe_mult(e: &FieldElement, f: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    partial_reduce(&unreduced_mult(e, f, cfg), cfg)
}

/// Square and partially reduce in one step.
pub fn fe_square(e: &FieldElement, cfg: &PrimeConfig) -> FieldElement {
    partial_reduce(&unreduced_square(e, cfg), cfg)
}

/// Value equality (reduces both sides to canonical form first).
pub fn fe_canonical_eq(a: &FieldElement, b: &FieldElement, cfg: &PrimeConfig) -> bool {
    full_reduce(a, cfg).limbs == full_reduce(b, cfg).limbs
}
