//! Portable 4-lane packed field elements.
//!
//! A packed element keeps limb j of all four lanes side by side in one
//! 32-byte-aligned word group, exactly the structure-of-arrays layout a
//! 256-bit vector unit consumes (lane i sits in 64-bit slot i). The lane
//! arithmetic is written as per-lane scalar code over the same limb kernels
//! the scalar path uses, so the two backends are bit-identical by
//! construction; the equivalence tests check it anyway, end to end, because
//! the *schedules* around the kernels differ.

// Lane kernels walk the word groups of several packed elements in lockstep;
// indexed loops are the clearer form here.
#![allow(clippy::needless_range_loop)]

use crate::field::{kernels, BoundClass, FieldElement};
use crate::params::PrimeConfig;

/// Four u64 lanes, aligned like a 256-bit vector register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[repr(C, align(32))]
pub struct Wide(pub [u64; 4]);

/// Four field elements, limb-major: `words[j].0[i]` is limb j of lane i.
#[derive(Debug, Clone, Copy)]
pub struct PackedLanes {
    words: [Wide; 5],
    bound: BoundClass,
}

impl PackedLanes {
    pub fn words(&self) -> [Wide; 5] {
        self.words
    }

    pub fn bound(&self) -> BoundClass {
        self.bound
    }

    /// Raw little-endian image of the live words: limb-major, lane-minor,
    /// 32 bytes per limb. This is the at-rest format of the key tables.
    pub fn to_bytes(&self, cfg: &PrimeConfig) -> Vec<u8> {
        let mut out = Vec::with_capacity(cfg.limb_count * 32);
        for w in &self.words[..cfg.limb_count] {
            for lane in w.0 {
                out.extend_from_slice(&lane.to_le_bytes());
            }
        }
        out
    }
}

/// Fold-scaled limbs 1.. of a packed fixed operand (see
/// [`crate::field::TildeElement`] for when the scaling pays off).
#[derive(Debug, Clone, Copy)]
pub struct PackedTilde {
    words: [Wide; 4],
}

impl PackedTilde {
    pub fn words(&self) -> [Wide; 4] {
        self.words
    }

    /// Raw little-endian image: limb_count - 1 words of 32 bytes.
    pub fn to_bytes(&self, cfg: &PrimeConfig) -> Vec<u8> {
        let mut out = Vec::with_capacity((cfg.limb_count - 1) * 32);
        for w in &self.words[..cfg.limb_count - 1] {
            for lane in w.0 {
                out.extend_from_slice(&lane.to_le_bytes());
            }
        }
        out
    }
}

/// Transposes four elements into lane form. The packed bound class is the
/// loosest of the four inputs.
pub fn pack4(lanes: &[FieldElement; 4], cfg: &PrimeConfig) -> PackedLanes {
    let mut words = [Wide([0; 4]); 5];
    let mut bound = BoundClass::Canonical;
    for (i, fe) in lanes.iter().enumerate() {
        let limbs = fe.limbs();
        for j in 0..cfg.limb_count {
            words[j].0[i] = limbs[j];
        }
        bound = bound.max(fe.bound());
    }
    PackedLanes { words, bound }
}

/// Transposes lane form back into four elements.
pub fn unpack4(p: &PackedLanes, cfg: &PrimeConfig) -> [FieldElement; 4] {
    std::array::from_fn(|i| {
        let mut limbs = [0u64; 5];
        for j in 0..cfg.limb_count {
            limbs[j] = p.words[j].0[i];
        }
        FieldElement::from_raw_parts(limbs, p.bound)
    })
}

/// One element copied into all four lanes.
pub fn lane_broadcast(e: &FieldElement, cfg: &PrimeConfig) -> PackedLanes {
    pack4(&[*e, *e, *e, *e], cfg)
}

/// Lane-wise sum, left unreduced (checked against overflow in debug builds).
pub fn lane_add(a: &PackedLanes, b: &PackedLanes, cfg: &PrimeConfig) -> PackedLanes {
    let mut words = [Wide([0; 4]); 5];
    for j in 0..cfg.limb_count {
        for i in 0..4 {
            words[j].0[i] = a.words[j].0[i]
                .checked_add(b.words[j].0[i])
                .expect("lane_add limb overflow: accumulation exceeded the documented envelope");
        }
    }
    PackedLanes {
        words,
        bound: BoundClass::Unreduced,
    }
}

#[inline(always)]
fn gather(p: &PackedLanes, lane: usize, cfg: &PrimeConfig) -> [u64; 5] {
    let mut limbs = [0u64; 5];
    for j in 0..cfg.limb_count {
        limbs[j] = p.words[j].0[lane];
    }
    limbs
}

#[inline(always)]
fn scatter(words: &mut [Wide; 5], lane: usize, limbs: &[u64; 5], cfg: &PrimeConfig) {
    for j in 0..cfg.limb_count {
        words[j].0[lane] = limbs[j];
    }
}

/// Lane-wise schoolbook product, left unreduced.
pub fn lane_unreduced_mult(a: &PackedLanes, b: &PackedLanes, cfg: &PrimeConfig) -> PackedLanes {
    let mut words = [Wide([0; 4]); 5];
    let a_wide = a.bound == BoundClass::Unreduced;
    let b_wide = b.bound == BoundClass::Unreduced;
    for i in 0..4 {
        let e = gather(a, i, cfg);
        let f = gather(b, i, cfg);
        let h = kernels::mul_limbs(cfg, &e, &f, a_wide, b_wide);
        scatter(&mut words, i, &h, cfg);
    }
    PackedLanes {
        words,
        bound: BoundClass::Unreduced,
    }
}

/// Lane-wise product with the fixed operand's fold-scaled limbs ready-made.
/// Bit-identical to [`lane_unreduced_mult`].
pub fn lane_unreduced_mult_tilde(
    e: &PackedLanes,
    e_tilde: &PackedTilde,
    f: &PackedLanes,
    cfg: &PrimeConfig,
) -> PackedLanes {
    let mut words = [Wide([0; 4]); 5];
    let e_wide = e.bound == BoundClass::Unreduced;
    let f_wide = f.bound == BoundClass::Unreduced;
    for i in 0..4 {
        let el = gather(e, i, cfg);
        let mut scaled = [0u64; 4];
        for j in 0..cfg.limb_count - 1 {
            scaled[j] = e_tilde.words[j].0[i];
        }
        let fl = gather(f, i, cfg);
        let h = kernels::mul_limbs_tilde(cfg, &el, &scaled, &fl, e_wide, f_wide);
        scatter(&mut words, i, &h, cfg);
    }
    PackedLanes {
        words,
        bound: BoundClass::Unreduced,
    }
}

/// Lane-wise partial reduction; per-lane bounds as in
/// [`crate::field::partial_reduce`].
pub fn lane_partial_reduce(a: &PackedLanes, cfg: &PrimeConfig) -> PackedLanes {
    let mut words = [Wide([0; 4]); 5];
    for i in 0..4 {
        let mut h = gather(a, i, cfg);
        kernels::partial_reduce_limbs(cfg, &mut h);
        scatter(&mut words, i, &h, cfg);
    }
    PackedLanes {
        words,
        bound: BoundClass::PartiallyReduced,
    }
}

/// Pre-scales limbs 1.. of every lane by the fold constant.
pub fn lane_precompute_tilde(e: &PackedLanes, cfg: &PrimeConfig) -> PackedTilde {
    let mut words = [Wide([0; 4]); 4];
    for j in 0..cfg.limb_count - 1 {
        for i in 0..4 {
            words[j].0[i] = cfg.fold_constant * e.words[j + 1].0[i];
        }
    }
    PackedTilde { words }
}

/// All four lanes set to zero (canonical).
pub fn lane_zero() -> PackedLanes {
    PackedLanes {
        words: [Wide([0; 4]); 5],
        bound: BoundClass::Canonical,
    }
}
