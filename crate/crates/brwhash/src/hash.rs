//! The hash constructions: polyHash, BRWHash, and decimated BRWHash.
//!
//! All three map a 16-byte key and a byte message to a 16-byte digest:
//!
//! - **polyHash** pads with [`PadScheme::Pad1`] and evaluates the classic
//!   keyed polynomial M1 t^l + M2 t^(l-1) + ... + Ml t by Horner's rule,
//!   one multiplication per block, with reductions amortized over groups of
//!   up to four blocks.
//! - **BRWHash** pads with [`PadScheme::Pad2`], evaluates the BRW form of
//!   the blocks (half the multiplications; see [`crate::brw`]), and binds
//!   the message length L into the result as (B t + L) t.
//! - **decimated BRWHash** splits the blocks round-robin into c streams,
//!   BRW-hashes each stream, and recombines them as a degree-d polynomial
//!   in the key before the same length wrap. With c = 4 the four streams
//!   line up one per SIMD lane, which is what [`Backend::Vec4`] exploits.
//!
//! The digest is the field value reduced mod p, then truncated mod 2^mu,
//! and always serialized as 16 little-endian bytes. An empty message
//! digests to all zeroes under every construction.
//!
//! Key material is precomputed once into a schedule ([`PolyKeySchedule`],
//! [`DecBrwKeySchedule`]); the one-shot functions build the schedule
//! internally. Every entry point takes an [`OpCounters`] so callers can
//! audit exactly how many field operations a call performed.

use crate::brw;
use crate::counters::OpCounters;
use crate::error::Error;
use crate::field::{
    digest_mod_2mu, fe_from_le_bytes, fe_from_u64, fe_mult, fe_square, fe_zero, full_reduce,
    partial_reduce, precompute_tilde, unreduced_add, unreduced_mult, unreduced_mult_tilde,
    FieldElement, TildeElement,
};
use crate::lanes::{
    lane_add, lane_broadcast, lane_partial_reduce, lane_precompute_tilde, lane_unreduced_mult,
    lane_unreduced_mult_tilde, pack4, unpack4, PackedLanes, PackedTilde,
};
use crate::params::{PrimeConfig, P1305};

/// How message bytes become field-element blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PadScheme {
    /// Append one 1-bit after each chunk: a chunk of s bytes becomes
    /// 2^(8s) + int(chunk). Injective on its own, so no length block is
    /// needed; this is the Poly1305 rule.
    Pad1,
    /// Keep chunks as raw little-endian integers. Not injective by itself;
    /// the constructions using it bind the bit length L into the wrap.
    Pad2,
}

/// Which execution path evaluates the hash. Digests are identical; only
/// the operation mix differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Scalar,
    /// Four-lane packed evaluation. polyHash accepts it for any parameters;
    /// decimated BRWHash requires exactly four streams.
    Vec4,
}

/// A message cut into field-element blocks, plus what the wrap needs.
pub struct FormattedMessage {
    pub blocks: Vec<FieldElement>,
    /// 8 times the message byte length.
    pub bit_len: u64,
    pub scheme: PadScheme,
}

/// Splits a message into blocks of the configuration's block size and maps
/// each to a field element under the chosen padding rule.
pub fn format_message(
    msg: &[u8],
    scheme: PadScheme,
    cfg: &PrimeConfig,
) -> Result<FormattedMessage, Error> {
    let bits = msg.len() as u128 * 8;
    if bits > u64::MAX as u128 {
        return Err(Error::MessageTooLong { bits });
    }
    let width = cfg.block_bytes();
    let mut blocks = Vec::with_capacity(msg.len().div_ceil(width));
    for chunk in msg.chunks(width) {
        let fe = match scheme {
            PadScheme::Pad1 => {
                let mut buf = [0u8; 17];
                buf[..chunk.len()].copy_from_slice(chunk);
                buf[chunk.len()] = 1;
                fe_from_le_bytes(&buf[..chunk.len() + 1], cfg)
            }
            PadScheme::Pad2 => fe_from_le_bytes(chunk, cfg),
        }
        .expect("padded blocks stay below the modulus");
        blocks.push(fe);
    }
    Ok(FormattedMessage {
        blocks,
        bit_len: bits as u64,
        scheme,
    })
}

/// Parses 16 key bytes into the key element, masking to the configured k
/// key bits (for 2^127 - 1 the top two bits are cleared). Since 2^k is at
/// most the modulus, the result is always canonical.
pub fn key_from_bytes(key: &[u8], cfg: &PrimeConfig) -> Result<FieldElement, Error> {
    if key.len() != cfg.key_bytes() {
        return Err(Error::KeyLength {
            expected: cfg.key_bytes(),
            got: key.len(),
        });
    }
    let mut masked = [0u8; 16];
    masked.copy_from_slice(key);
    let spare = 128 - cfg.k;
    if spare > 0 {
        masked[15] &= 0xff >> spare;
    }
    fe_from_le_bytes(&masked, cfg)
}

fn check_group(group: usize) -> Result<(), Error> {
    if (1..=4).contains(&group) {
        Ok(())
    } else {
        Err(Error::InvalidGroupSize(group))
    }
}

fn check_leaf_order(t: u32) -> Result<(), Error> {
    if (2..=5).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidLeafOrder(t))
    }
}

fn check_streams(streams: usize) -> Result<(), Error> {
    if (1..=8).contains(&streams) {
        Ok(())
    } else {
        Err(Error::InvalidStreamCount(streams))
    }
}

/// Precomputed key material for polyHash with a fixed Horner group size g.
///
/// Scalar evaluation uses t^1..t^4 with their fold-scaled companions. The
/// packed path works in gamma = t^4 (one step per four blocks) and needs
/// gamma^1..gamma^g broadcast across lanes, their scaled companions, and
/// the lane constant (t^4, t^3, t^2, t) that turns per-lane sums back into
/// the single polynomial value.
pub struct PolyKeySchedule {
    cfg: &'static PrimeConfig,
    group: usize,
    scalar_pows: [FieldElement; 4],
    scalar_tildes: [TildeElement; 4],
    gamma_pows: Vec<PackedLanes>,
    gamma_tildes: Vec<PackedTilde>,
    tau_theta: PackedLanes,
}

impl PolyKeySchedule {
    pub fn new(
        key: &[u8],
        group: usize,
        cfg: &'static PrimeConfig,
        counters: &mut OpCounters,
    ) -> Result<Self, Error> {
        check_group(group)?;
        let tau = key_from_bytes(key, cfg)?;
        counters.squarings += 1;
        let tau2 = fe_square(&tau, cfg);
        counters.full_mults += 1;
        let tau3 = fe_mult(&tau2, &tau, cfg);
        counters.squarings += 1;
        let tau4 = fe_square(&tau2, cfg);
        let scalar_pows = [tau, tau2, tau3, tau4];
        let scalar_tildes = std::array::from_fn(|i| precompute_tilde(&scalar_pows[i], cfg));

        let mut gamma_scalar = vec![tau4];
        for j in 1..group {
            counters.full_mults += 1;
            gamma_scalar.push(fe_mult(&gamma_scalar[j - 1], &tau4, cfg));
        }
        let gamma_pows: Vec<PackedLanes> = gamma_scalar
            .iter()
            .map(|e| lane_broadcast(e, cfg))
            .collect();
        let gamma_tildes = gamma_pows
            .iter()
            .map(|e| lane_precompute_tilde(e, cfg))
            .collect();
        let tau_theta = pack4(&[tau4, tau3, tau2, tau], cfg);
        Ok(Self {
            cfg,
            group,
            scalar_pows,
            scalar_tildes,
            gamma_pows,
            gamma_tildes,
            tau_theta,
        })
    }

    pub fn group_size(&self) -> usize {
        self.group
    }

    /// Bytes the packed key material occupies at rest: the lane constant
    /// plus one power/companion pair per group slot.
    pub fn vector_table_bytes(&self) -> usize {
        self.tau_theta.to_bytes(self.cfg).len()
            + self
                .gamma_pows
                .iter()
                .map(|p| p.to_bytes(self.cfg).len())
                .sum::<usize>()
            + self
                .gamma_tildes
                .iter()
                .map(|t| t.to_bytes(self.cfg).len())
                .sum::<usize>()
    }

    /// The polyHash digest of `msg`.
    pub fn hash(
        &self,
        msg: &[u8],
        backend: Backend,
        counters: &mut OpCounters,
    ) -> Result<[u8; 16], Error> {
        let formatted = format_message(msg, PadScheme::Pad1, self.cfg)?;
        let value = match backend {
            Backend::Scalar => self.value_scalar(&formatted.blocks, counters),
            Backend::Vec4 => self.value_vec4(&formatted.blocks, counters),
        };
        Ok(digest_mod_2mu(&full_reduce(&value, self.cfg), self.cfg))
    }

    /// Multiplies by t^j (j in 1..=4), counted.
    fn mult_pow(
        &self,
        j: usize,
        f: &FieldElement,
        counters: &mut OpCounters,
    ) -> FieldElement {
        counters.scalar_unreduced_mults += 1;
        unreduced_mult_tilde(
            &self.scalar_pows[j - 1],
            &self.scalar_tildes[j - 1],
            f,
            self.cfg,
        )
    }

    /// Lane multiplication by gamma^j (j in 1..=g), counted.
    fn lane_mult_gamma(
        &self,
        j: usize,
        f: &PackedLanes,
        counters: &mut OpCounters,
    ) -> PackedLanes {
        counters.lane_unreduced_mults += 1;
        lane_unreduced_mult_tilde(&self.gamma_pows[j - 1], &self.gamma_tildes[j - 1], f, self.cfg)
    }

    /// Grouped Horner: the accumulator holds t * Poly(processed blocks), and
    /// each group of h <= g blocks costs h multiplications and one
    /// reduction:
    ///
    ///   acc' = (acc + M1) t^h + M2 t^(h-1) + ... + Mh t
    fn value_scalar(&self, blocks: &[FieldElement], counters: &mut OpCounters) -> FieldElement {
        let cfg = self.cfg;
        let mut acc = fe_zero();
        let mut i = 0;
        while i < blocks.len() {
            let h = self.group.min(blocks.len() - i);
            let first = unreduced_add(&acc, &blocks[i], cfg);
            let mut sum = self.mult_pow(h, &first, counters);
            for j in 1..h {
                let term = self.mult_pow(h - j, &blocks[i + j], counters);
                sum = unreduced_add(&sum, &term, cfg);
            }
            counters.scalar_reductions += 1;
            acc = partial_reduce(&sum, cfg);
            i += h;
        }
        acc
    }

    /// Packed evaluation. Blocks are packed four at a time in message
    /// order, the packed accumulator runs a gamma-Horner (gamma = t^4, no
    /// trailing factor), and the lane constant (t^4, t^3, t^2, t) plus a
    /// cross-lane sum turn the four lane values into t * Poly(first 4l'
    /// blocks). Up to three leftover blocks finish through one scalar
    /// group. Per four blocks this is one lane multiplication and 1/g lane
    /// reductions, a quarter of the scalar work.
    fn value_vec4(&self, blocks: &[FieldElement], counters: &mut OpCounters) -> FieldElement {
        let cfg = self.cfg;
        let vector_blocks = blocks.len() / 4;
        if vector_blocks == 0 {
            return self.value_scalar(blocks, counters);
        }
        let packed: Vec<PackedLanes> = (0..vector_blocks)
            .map(|i| pack4(&std::array::from_fn(|s| blocks[4 * i + s]), cfg))
            .collect();

        // First group: acc starts as the first packed block folded with the
        // next s of them; later groups take h more each.
        let seed = (vector_blocks - 1).min(self.group);
        let mut acc = if seed == 0 {
            packed[0]
        } else {
            let mut sum = self.lane_mult_gamma(seed, &packed[0], counters);
            // The power seed - j and the block index j move in opposite
            // directions, so the indexed loop is the clearer form.
            #[allow(clippy::needless_range_loop)]
            for j in 1..seed {
                let term = self.lane_mult_gamma(seed - j, &packed[j], counters);
                sum = lane_add(&sum, &term, cfg);
            }
            sum = lane_add(&sum, &packed[seed], cfg);
            counters.lane_reductions += 1;
            lane_partial_reduce(&sum, cfg)
        };
        let mut i = seed + 1;
        while i < vector_blocks {
            let h = self.group.min(vector_blocks - i);
            let mut sum = self.lane_mult_gamma(h, &acc, counters);
            for j in 0..h - 1 {
                let term = self.lane_mult_gamma(h - 1 - j, &packed[i + j], counters);
                sum = lane_add(&sum, &term, cfg);
            }
            sum = lane_add(&sum, &packed[i + h - 1], cfg);
            counters.lane_reductions += 1;
            acc = lane_partial_reduce(&sum, cfg);
            i += h;
        }

        // Weight the lanes by (t^4, t^3, t^2, t) and collapse them.
        counters.lane_unreduced_mults += 1;
        let weighted = lane_unreduced_mult(&acc, &self.tau_theta, cfg);
        let lanes = unpack4(&weighted, cfg);
        let mut sum = lanes[0];
        for lane in &lanes[1..] {
            sum = unreduced_add(&sum, lane, cfg);
        }
        counters.scalar_reductions += 1;
        let mut value = partial_reduce(&sum, cfg);

        // Scalar tail for the 0..=3 blocks that did not fill a pack.
        let rest = &blocks[4 * vector_blocks..];
        if !rest.is_empty() {
            let h = rest.len();
            let first = unreduced_add(&value, &rest[0], cfg);
            let mut sum = self.mult_pow(h, &first, counters);
            for (j, block) in rest.iter().enumerate().skip(1) {
                let term = self.mult_pow(h - j, block, counters);
                sum = unreduced_add(&sum, &term, cfg);
            }
            counters.scalar_reductions += 1;
            value = partial_reduce(&sum, cfg);
        }
        value
    }
}

/// One-shot polyHash: builds the schedule and hashes in one call, counting
/// both phases into the same counters.
pub fn polyhash(
    key: &[u8],
    msg: &[u8],
    group: usize,
    backend: Backend,
    cfg: &'static PrimeConfig,
    counters: &mut OpCounters,
) -> Result<[u8; 16], Error> {
    PolyKeySchedule::new(key, group, cfg, counters)?.hash(msg, backend, counters)
}

/// Precomputed square-power ladder for BRWHash, sized for messages up to
/// `max_blocks` blocks.
///
/// Splitting the ladder from the hash separates the one-time squaring cost
/// from the per-message work. Messages longer than planned still hash
/// correctly: the ladder is extended on the fly for that call (the extra
/// squarings are counted).
pub struct BrwKeyLadder {
    cfg: &'static PrimeConfig,
    ladder: Vec<FieldElement>,
}

impl BrwKeyLadder {
    pub fn new(
        key: &[u8],
        max_blocks: usize,
        cfg: &'static PrimeConfig,
        counters: &mut OpCounters,
    ) -> Result<Self, Error> {
        let tau = key_from_bytes(key, cfg)?;
        let ladder = brw::key_ladder(&tau, max_blocks, cfg, counters);
        Ok(Self { cfg, ladder })
    }

    /// BRWHash digest of `msg`: BRW over the pad2 blocks, then the length
    /// wrap (B t + L) t, counted as two plain multiplications and
    /// reductions.
    pub fn hash(
        &self,
        msg: &[u8],
        leaf_order: u32,
        counters: &mut OpCounters,
    ) -> Result<[u8; 16], Error> {
        check_leaf_order(leaf_order)?;
        let cfg = self.cfg;
        let formatted = format_message(msg, PadScheme::Pad2, cfg)?;
        let top = brw::ladder_top(formatted.blocks.len());

        let mut extended: Vec<FieldElement>;
        let ladder: &[FieldElement] = if top < self.ladder.len() {
            &self.ladder
        } else {
            extended = self.ladder.clone();
            while extended.len() <= top {
                counters.squarings += 1;
                extended.push(fe_square(extended.last().unwrap(), cfg));
            }
            &extended
        };

        let value = brw::evaluate(ladder, &formatted.blocks, leaf_order, cfg, counters).value;
        let tau = &ladder[0];
        counters.scalar_unreduced_mults += 1;
        let wrapped = unreduced_mult(tau, &value, cfg);
        let wrapped = unreduced_add(&wrapped, &fe_from_u64(formatted.bit_len, cfg), cfg);
        counters.scalar_reductions += 1;
        let wrapped = partial_reduce(&wrapped, cfg);
        counters.scalar_unreduced_mults += 1;
        let wrapped = unreduced_mult(tau, &wrapped, cfg);
        counters.scalar_reductions += 1;
        let wrapped = partial_reduce(&wrapped, cfg);
        Ok(digest_mod_2mu(&full_reduce(&wrapped, cfg), cfg))
    }
}

/// One-shot BRWHash; the key-power squarings land in the same counters as
/// the hash itself.
pub fn brwhash(
    key: &[u8],
    msg: &[u8],
    leaf_order: u32,
    cfg: &'static PrimeConfig,
    counters: &mut OpCounters,
) -> Result<[u8; 16], Error> {
    check_leaf_order(leaf_order)?;
    let blocks = msg.len().div_ceil(cfg.block_bytes());
    BrwKeyLadder::new(key, blocks, cfg, counters)?.hash(msg, leaf_order, counters)
}

/// Precomputed key material for decimated BRWHash with a fixed stream
/// count, sized for messages up to `max_blocks` blocks.
///
/// Only square powers t^(2^j) are ever needed. The scalar ladder serves
/// the per-stream evaluations; its lane broadcasts serve the packed path.
/// Messages longer than planned still hash correctly: the ladder is
/// extended on the fly for that call (the extra squarings are counted).
pub struct DecBrwKeySchedule {
    cfg: &'static PrimeConfig,
    streams: usize,
    ladder: Vec<FieldElement>,
    broadcasts: Vec<PackedLanes>,
}

impl DecBrwKeySchedule {
    pub fn new(
        key: &[u8],
        streams: usize,
        max_blocks: usize,
        cfg: &'static PrimeConfig,
        counters: &mut OpCounters,
    ) -> Result<Self, Error> {
        check_streams(streams)?;
        let tau = key_from_bytes(key, cfg)?;
        let longest_stream = max_blocks.div_ceil(streams).max(1);
        let ladder = brw::key_ladder(&tau, longest_stream, cfg, counters);
        let broadcasts = ladder.iter().map(|e| lane_broadcast(e, cfg)).collect();
        Ok(Self {
            cfg,
            streams,
            ladder,
            broadcasts,
        })
    }

    pub fn stream_count(&self) -> usize {
        self.streams
    }

    /// Bytes the packed ladder occupies at rest. The key itself (entry 0)
    /// is not table material, so only the squared powers count: one
    /// broadcast word group per ladder step.
    pub fn vector_table_bytes(&self) -> usize {
        self.broadcasts[1..]
            .iter()
            .map(|b| b.to_bytes(self.cfg).len())
            .sum()
    }

    /// The decimated BRWHash digest of `msg`.
    ///
    /// Scalar: each of the c streams is BRW-evaluated on its own. Vec4
    /// (streams must be exactly 4): the four streams ride the four lanes
    /// of one packed evaluation. Either way the stream values Q_j then
    /// recombine as Q_1 d^(c-1) + ... + Q_c in d = t^(2^(floor(lg n)+1)),
    /// followed by the same length wrap BRWHash uses; those combine steps
    /// are full multiplications.
    pub fn hash(
        &self,
        msg: &[u8],
        leaf_order: u32,
        backend: Backend,
        counters: &mut OpCounters,
    ) -> Result<[u8; 16], Error> {
        check_leaf_order(leaf_order)?;
        if backend == Backend::Vec4 && self.streams != 4 {
            return Err(Error::VectorStreamCount(self.streams));
        }
        let cfg = self.cfg;
        let formatted = format_message(msg, PadScheme::Pad2, cfg)?;
        let blocks = &formatted.blocks;
        if blocks.is_empty() {
            return Ok([0u8; 16]);
        }
        let per_stream = blocks.len().div_ceil(self.streams);
        let top = brw::ladder_top(per_stream);

        // The planned ladder normally covers the message; extend a local
        // copy when it does not.
        let mut extended: Vec<FieldElement>;
        let ladder: &[FieldElement] = if top < self.ladder.len() {
            &self.ladder
        } else {
            extended = self.ladder.clone();
            while extended.len() <= top {
                counters.squarings += 1;
                extended.push(fe_square(extended.last().unwrap(), cfg));
            }
            &extended
        };

        let stream_values: Vec<FieldElement> = match backend {
            Backend::Scalar => (0..self.streams)
                .map(|s| {
                    let stream: Vec<FieldElement> = (0..per_stream)
                        .map(|i| {
                            blocks
                                .get(i * self.streams + s)
                                .copied()
                                .unwrap_or_else(fe_zero)
                        })
                        .collect();
                    brw::evaluate(ladder, &stream, leaf_order, cfg, counters).value
                })
                .collect(),
            Backend::Vec4 => {
                let packed: Vec<PackedLanes> = (0..per_stream)
                    .map(|i| {
                        pack4(
                            &std::array::from_fn(|s| {
                                blocks.get(i * 4 + s).copied().unwrap_or_else(fe_zero)
                            }),
                            cfg,
                        )
                    })
                    .collect();
                let mut lane_ladder: Vec<PackedLanes> = Vec::with_capacity(top + 1);
                lane_ladder.extend_from_slice(&self.broadcasts[..(top + 1).min(self.broadcasts.len())]);
                for entry in &ladder[lane_ladder.len()..=top] {
                    lane_ladder.push(lane_broadcast(entry, cfg));
                }
                let out = brw::evaluate_lanes(&lane_ladder, &packed, leaf_order, cfg, counters);
                unpack4(&out.value, cfg).to_vec()
            }
        };

        let mut acc = stream_values[0];
        if self.streams > 1 {
            counters.squarings += 1;
            let tau_d = fe_square(&ladder[top], cfg);
            for q in &stream_values[1..] {
                counters.full_mults += 1;
                let product = fe_mult(&acc, &tau_d, cfg);
                acc = unreduced_add(&product, q, cfg);
            }
        }

        let tau = &ladder[0];
        counters.full_mults += 1;
        let wrapped = fe_mult(&acc, tau, cfg);
        let wrapped = unreduced_add(&wrapped, &fe_from_u64(formatted.bit_len, cfg), cfg);
        counters.full_mults += 1;
        let wrapped = fe_mult(&wrapped, tau, cfg);
        Ok(digest_mod_2mu(&full_reduce(&wrapped, cfg), cfg))
    }
}

/// One-shot decimated BRWHash; schedule build and hash count into the same
/// counters.
pub fn decbrw_hash(
    key: &[u8],
    msg: &[u8],
    streams: usize,
    leaf_order: u32,
    backend: Backend,
    cfg: &'static PrimeConfig,
    counters: &mut OpCounters,
) -> Result<[u8; 16], Error> {
    let width = cfg.block_bytes();
    let schedule = DecBrwKeySchedule::new(key, streams, msg.len().div_ceil(width), cfg, counters)?;
    schedule.hash(msg, leaf_order, backend, counters)
}

/// RFC 8439 Poly1305: clamp r, run polyHash over 2^130 - 5 with pad1, and
/// add the 16-byte s part mod 2^128.
pub fn poly1305(
    key: &[u8],
    msg: &[u8],
    group: usize,
    backend: Backend,
    counters: &mut OpCounters,
) -> Result<[u8; 16], Error> {
    if key.len() != 32 {
        return Err(Error::KeyLength {
            expected: 32,
            got: key.len(),
        });
    }
    let mut r = [0u8; 16];
    r.copy_from_slice(&key[..16]);
    for i in [3, 7, 11, 15] {
        r[i] &= 0x0f;
    }
    for i in [4, 8, 12] {
        r[i] &= 0xfc;
    }
    let schedule = PolyKeySchedule::new(&r, group, &P1305, counters)?;
    let digest = schedule.hash(msg, backend, counters)?;
    let mut tag = [0u8; 16];
    let mut carry = 0u16;
    for i in 0..16 {
        let sum = digest[i] as u16 + key[16 + i] as u16 + carry;
        tag[i] = sum as u8;
        carry = sum >> 8;
    }
    Ok(tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::params::{ALL_CONFIGS, P1271, P1271_R32};
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn static_cfg(cfg: &PrimeConfig) -> &'static PrimeConfig {
        ALL_CONFIGS
            .iter()
            .find(|c| std::ptr::eq(**c, cfg))
            .copied()
            .expect("config is one of the built-ins")
    }

    fn random_msg(rng: &mut ChaCha20Rng, len: usize) -> Vec<u8> {
        let mut msg = vec![0u8; len];
        rng.fill_bytes(&mut msg);
        msg
    }

    fn message_lengths(cfg: &PrimeConfig) -> Vec<usize> {
        let b = cfg.block_bytes();
        vec![
            0,
            1,
            b - 1,
            b,
            b + 1,
            2 * b,
            3 * b + 2,
            4 * b,
            5 * b + 3,
            16 * b,
            17 * b + b / 2,
            33 * b + 1,
        ]
    }

    #[test]
    fn polyhash_matches_the_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0001);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            for len in message_lengths(cfg) {
                let msg = random_msg(&mut rng, len);
                let expect = oracle::polyhash_digest(&key, &msg, cfg);
                for group in 1..=4 {
                    let mut counters = OpCounters::new();
                    let got = polyhash(&key, &msg, group, Backend::Scalar, static_cfg(cfg), &mut counters)
                        .unwrap();
                    assert_eq!(got, expect, "cfg {:?} len {len} g {group}", cfg.prime_id);
                }
            }
        }
    }

    #[test]
    fn packed_polyhash_is_bit_identical_to_scalar() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0002);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            for group in 1..=4 {
                let mut counters = OpCounters::new();
                let schedule =
                    PolyKeySchedule::new(&key, group, static_cfg(cfg), &mut counters).unwrap();
                for len in message_lengths(cfg) {
                    let msg = random_msg(&mut rng, len);
                    let scalar = schedule.hash(&msg, Backend::Scalar, &mut counters).unwrap();
                    let packed = schedule.hash(&msg, Backend::Vec4, &mut counters).unwrap();
                    assert_eq!(scalar, packed, "cfg {:?} len {len} g {group}", cfg.prime_id);
                }
            }
        }
    }

    #[test]
    fn polyhash_operation_counts_follow_the_block_count() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0003);
        let cfg = &P1305;
        let mut key = [0u8; 16];
        rng.fill_bytes(&mut key);
        let b = cfg.block_bytes();
        for group in 1..=4usize {
            let mut build = OpCounters::new();
            let schedule = PolyKeySchedule::new(&key, group, cfg, &mut build).unwrap();
            for blocks in [0usize, 1, 2, 3, 4, 5, 7, 8, 16, 17, 64, 65, 100] {
                let msg = random_msg(&mut rng, blocks * b);

                let mut scalar = OpCounters::new();
                schedule.hash(&msg, Backend::Scalar, &mut scalar).unwrap();
                assert_eq!(scalar.scalar_unreduced_mults, blocks as u64);
                assert_eq!(scalar.scalar_reductions, blocks.div_ceil(group) as u64);
                assert_eq!(scalar.lane_unreduced_mults, 0);
                assert_eq!(scalar.squarings + scalar.full_mults, 0);

                let mut packed = OpCounters::new();
                schedule.hash(&msg, Backend::Vec4, &mut packed).unwrap();
                let vector_blocks = blocks / 4;
                if vector_blocks == 0 {
                    assert_eq!(packed.scalar_unreduced_mults, blocks as u64);
                    assert_eq!(packed.lane_unreduced_mults, 0);
                } else {
                    let rest = blocks % 4;
                    assert_eq!(packed.lane_unreduced_mults, vector_blocks as u64);
                    let lane_reds = if vector_blocks <= 1 {
                        0
                    } else {
                        (vector_blocks - 1).div_ceil(group)
                    };
                    assert_eq!(packed.lane_reductions, lane_reds as u64);
                    assert_eq!(packed.scalar_unreduced_mults, rest as u64);
                    let tail_red = usize::from(rest > 0);
                    assert_eq!(packed.scalar_reductions, (1 + tail_red) as u64);
                }
            }
        }
    }

    #[test]
    fn brwhash_matches_the_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0004);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            for len in message_lengths(cfg) {
                let msg = random_msg(&mut rng, len);
                let expect = oracle::brwhash_digest(&key, &msg, cfg);
                for t in 2..=5 {
                    let mut counters = OpCounters::new();
                    let got = brwhash(&key, &msg, t, static_cfg(cfg), &mut counters).unwrap();
                    assert_eq!(got, expect, "cfg {:?} len {len} t {t}", cfg.prime_id);
                }
            }
        }
    }

    #[test]
    fn brwhash_operation_counts_include_the_wrap() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0005);
        let cfg = &P1271;
        let mut key = [0u8; 16];
        rng.fill_bytes(&mut key);
        let b = cfg.block_bytes();
        for blocks in [1usize, 2, 3, 4, 5, 8, 16, 31, 33, 100, 257] {
            let msg = random_msg(&mut rng, blocks * b);
            for t in 2..=5 {
                let mut counters = OpCounters::new();
                brwhash(&key, &msg, t, cfg, &mut counters).unwrap();
                assert_eq!(counters.scalar_unreduced_mults, (2 + blocks / 2) as u64);
                assert_eq!(counters.scalar_reductions, (3 + blocks / 4) as u64);
                let lg = if blocks <= 1 {
                    0
                } else {
                    crate::brw::ladder_top(blocks) as u64
                };
                assert_eq!(counters.squarings, lg);
                assert_eq!(counters.full_mults, 0);
            }
        }
    }

    #[test]
    fn decimated_hash_matches_the_oracle() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0006);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            for len in message_lengths(cfg) {
                let msg = random_msg(&mut rng, len);
                for c in [1usize, 2, 3, 4, 5, 8] {
                    let expect = oracle::dec_brw_digest(&key, &msg, c, cfg);
                    let mut counters = OpCounters::new();
                    let got = decbrw_hash(
                        &key,
                        &msg,
                        c,
                        3,
                        Backend::Scalar,
                        static_cfg(cfg),
                        &mut counters,
                    )
                    .unwrap();
                    assert_eq!(got, expect, "cfg {:?} len {len} c {c}", cfg.prime_id);
                }
            }
        }
    }

    #[test]
    fn packed_decimated_hash_is_bit_identical_to_scalar() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0007);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            let mut build = OpCounters::new();
            let schedule = DecBrwKeySchedule::new(&key, 4, 64, static_cfg(cfg), &mut build).unwrap();
            for len in message_lengths(cfg) {
                let msg = random_msg(&mut rng, len);
                for t in 2..=5 {
                    let mut a = OpCounters::new();
                    let mut b = OpCounters::new();
                    let scalar = schedule.hash(&msg, t, Backend::Scalar, &mut a).unwrap();
                    let packed = schedule.hash(&msg, t, Backend::Vec4, &mut b).unwrap();
                    assert_eq!(scalar, packed, "cfg {:?} len {len} t {t}", cfg.prime_id);
                }
            }
        }
    }

    #[test]
    fn one_stream_decimation_is_plain_brwhash() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0008);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            for len in [0usize, 5, 40, 333] {
                let msg = random_msg(&mut rng, len);
                let mut a = OpCounters::new();
                let mut b = OpCounters::new();
                let plain = brwhash(&key, &msg, 4, static_cfg(cfg), &mut a).unwrap();
                let dec = decbrw_hash(&key, &msg, 1, 4, Backend::Scalar, static_cfg(cfg), &mut b)
                    .unwrap();
                assert_eq!(plain, dec);
            }
        }
    }

    #[test]
    fn decimated_operation_counts_split_by_phase() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_0009);
        let cfg = &P1305;
        let mut key = [0u8; 16];
        rng.fill_bytes(&mut key);
        let b = cfg.block_bytes();
        for blocks in [1usize, 3, 4, 5, 16, 17, 64, 100, 257] {
            for c in [1usize, 2, 4, 5] {
                let msg = random_msg(&mut rng, blocks * b);
                let mut build = OpCounters::new();
                let schedule = DecBrwKeySchedule::new(&key, c, blocks, cfg, &mut build).unwrap();
                let n = blocks.div_ceil(c);

                let mut scalar = OpCounters::new();
                schedule.hash(&msg, 5, Backend::Scalar, &mut scalar).unwrap();
                assert_eq!(scalar.scalar_unreduced_mults, (c * (n / 2)) as u64);
                assert_eq!(scalar.scalar_reductions, (c * (1 + n / 4)) as u64);
                assert_eq!(scalar.full_mults, (c + 1) as u64);
                assert_eq!(scalar.squarings, u64::from(c > 1));

                if c == 4 {
                    let mut packed = OpCounters::new();
                    schedule.hash(&msg, 5, Backend::Vec4, &mut packed).unwrap();
                    assert_eq!(packed.lane_unreduced_mults, (n / 2) as u64);
                    assert_eq!(packed.lane_reductions, (1 + n / 4) as u64);
                    assert_eq!(packed.scalar_unreduced_mults, 0);
                    assert_eq!(packed.full_mults, 5);
                    assert_eq!(packed.squarings, 1);
                }
            }
        }
    }

    #[test]
    fn poly1305_matches_the_rfc_vector() {
        let key = hex_bytes(
            "85d6be7857556d337f4452fe42d506a80103808afb0db2fd4abff6af4149f51b",
        );
        let msg = b"Cryptographic Forum Research Group";
        for group in 1..=4 {
            for backend in [Backend::Scalar, Backend::Vec4] {
                let mut counters = OpCounters::new();
                let tag = poly1305(&key, msg, group, backend, &mut counters).unwrap();
                assert_eq!(
                    hex_string(&tag),
                    "a8061dc1305136c6c22b8baf0c0127a9",
                    "g {group} backend {backend:?}"
                );
            }
        }
    }

    #[test]
    fn key_masking_clears_the_top_bits() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_000a);
        for cfg in [&P1271, &P1271_R32] {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            let mut shadow = key;
            key[15] |= 0xc0;
            shadow[15] &= 0x3f;
            let msg = random_msg(&mut rng, 100);
            let mut a = OpCounters::new();
            let mut b = OpCounters::new();
            assert_eq!(
                polyhash(&key, &msg, 2, Backend::Scalar, static_cfg(cfg), &mut a).unwrap(),
                polyhash(&shadow, &msg, 2, Backend::Scalar, static_cfg(cfg), &mut b).unwrap(),
            );
        }
    }

    #[test]
    fn empty_message_digests_to_zero_everywhere() {
        let mut rng = ChaCha20Rng::seed_from_u64(0x4a51_000b);
        for cfg in ALL_CONFIGS {
            let mut key = [0u8; 16];
            rng.fill_bytes(&mut key);
            let mut counters = OpCounters::new();
            let zero = [0u8; 16];
            for backend in [Backend::Scalar, Backend::Vec4] {
                assert_eq!(
                    polyhash(&key, b"", 3, backend, static_cfg(cfg), &mut counters).unwrap(),
                    zero
                );
                assert_eq!(
                    decbrw_hash(&key, b"", 4, 2, backend, static_cfg(cfg), &mut counters).unwrap(),
                    zero
                );
            }
            assert_eq!(
                brwhash(&key, b"", 2, static_cfg(cfg), &mut counters).unwrap(),
                zero
            );
        }
    }

    #[test]
    fn table_sizes_reflect_the_layouts() {
        let key = [7u8; 16];
        let mut counters = OpCounters::new();
        for cfg in [&P1305, &P1271] {
            for group in 1..=4usize {
                let schedule = PolyKeySchedule::new(&key, group, cfg, &mut counters).unwrap();
                assert_eq!(schedule.vector_table_bytes(), 160 + 288 * group);
            }
        }
        for group in 1..=4usize {
            let schedule = PolyKeySchedule::new(&key, group, &P1271_R32, &mut counters).unwrap();
            assert_eq!(schedule.vector_table_bytes(), 128 + 224 * group);
        }
        // One broadcast ladder entry per squaring step: 160 bytes each for
        // the five-limb layouts.
        for (blocks, expect) in [(4usize, 0usize), (8, 160), (64, 640), (1 << 15, 2080)] {
            let schedule = DecBrwKeySchedule::new(&key, 4, blocks, &P1305, &mut counters).unwrap();
            assert_eq!(
                schedule.vector_table_bytes(),
                expect,
                "blocks {blocks}"
            );
        }
    }

    #[test]
    fn parameter_validation() {
        let key = [1u8; 16];
        let mut counters = OpCounters::new();
        assert!(matches!(
            polyhash(&key, b"x", 0, Backend::Scalar, &P1305, &mut counters),
            Err(Error::InvalidGroupSize(0))
        ));
        assert!(matches!(
            polyhash(&key, b"x", 5, Backend::Scalar, &P1305, &mut counters),
            Err(Error::InvalidGroupSize(5))
        ));
        assert!(matches!(
            brwhash(&key, b"x", 1, &P1305, &mut counters),
            Err(Error::InvalidLeafOrder(1))
        ));
        assert!(matches!(
            brwhash(&key, b"x", 6, &P1305, &mut counters),
            Err(Error::InvalidLeafOrder(6))
        ));
        assert!(matches!(
            decbrw_hash(&key, b"x", 0, 2, Backend::Scalar, &P1305, &mut counters),
            Err(Error::InvalidStreamCount(0))
        ));
        assert!(matches!(
            decbrw_hash(&key, b"x", 9, 2, Backend::Scalar, &P1305, &mut counters),
            Err(Error::InvalidStreamCount(9))
        ));
        assert!(matches!(
            decbrw_hash(&key, b"x", 2, 2, Backend::Vec4, &P1305, &mut counters),
            Err(Error::VectorStreamCount(2))
        ));
        assert!(matches!(
            polyhash(&key[..5], b"x", 1, Backend::Scalar, &P1305, &mut counters),
            Err(Error::KeyLength { expected: 16, got: 5 })
        ));
        assert!(matches!(
            poly1305(&key, b"x", 1, Backend::Scalar, &mut counters),
            Err(Error::KeyLength { expected: 32, got: 16 })
        ));
    }

    fn hex_bytes(s: &str) -> Vec<u8> {
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap())
            .collect()
    }

    fn hex_string(bytes: &[u8]) -> String {
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}
