//! Bernstein-Rabin-Winograd polynomial evaluation.
//!
//! The BRW form hashes l blocks with about l/2 multiplications instead of
//! the l a Horner-style polynomial needs. It is defined recursively:
//!
//! - no blocks: 0
//! - one block: M1
//! - two blocks: M1 t + M2
//! - three blocks: (t + M1)(t^2 + M2) + M3
//! - four or more: with 2^r the largest power of two at most l,
//!   BRW(M1..M_{2^r - 1}) (t^{2^r} + M_{2^r}) + BRW(M_{2^r + 1}..M_l)
//!
//! where t is the key. Only key powers of the form t^{2^j} ever appear, so a
//! short squaring ladder replaces a full power table.
//!
//! [`evaluate`] computes this iteratively: the block stream is cut into
//! leaves of 2^t blocks, each leaf is evaluated straight-line, and a small
//! stack merges leaves into the recursion's shape. The amount of deferred
//! work is bounded by the stack high-water mark, which grows with log(l),
//! never with l. Each full leaf contributes 2^(t-1) multiplications and
//! 2^(t-2) reductions, which is how the l/2 total comes about.
//!
//! Everything here is written against the crate-internal `BrwOps` trait, so
//! the scalar and the packed 4-lane backends run the very same driver.

use crate::counters::OpCounters;
use crate::field::{
    fe_square, partial_reduce, unreduced_add, unreduced_mult, FieldElement,
};
use crate::lanes::{
    lane_add, lane_partial_reduce, lane_unreduced_mult, lane_zero, PackedLanes,
};
use crate::params::PrimeConfig;

/// Element operations the evaluation driver needs, with operation counting
/// routed to the right counter group for the backend.
pub(crate) trait BrwOps {
    type Elem: Copy;

    fn zero(&self) -> Self::Elem;
    /// Unreduced sum; free in the cost model.
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Unreduced product; counted.
    fn mul(&self, a: Self::Elem, b: Self::Elem, counters: &mut OpCounters) -> Self::Elem;
    /// Partial reduction; counted.
    fn reduce(&self, a: Self::Elem, counters: &mut OpCounters) -> Self::Elem;
    /// The ladder entry t^(2^j).
    fn key(&self, j: usize) -> Self::Elem;
    /// t^(2^j) + m, the factor BRW pairs with a block; free.
    fn key_plus(&self, j: usize, m: Self::Elem) -> Self::Elem;
}

pub(crate) struct ScalarOps<'a> {
    pub cfg: &'a PrimeConfig,
    pub ladder: &'a [FieldElement],
}

impl BrwOps for ScalarOps<'_> {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        crate::field::fe_zero()
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        unreduced_add(&a, &b, self.cfg)
    }

    fn mul(&self, a: FieldElement, b: FieldElement, counters: &mut OpCounters) -> FieldElement {
        counters.scalar_unreduced_mults += 1;
        unreduced_mult(&a, &b, self.cfg)
    }

    fn reduce(&self, a: FieldElement, counters: &mut OpCounters) -> FieldElement {
        counters.scalar_reductions += 1;
        partial_reduce(&a, self.cfg)
    }

    fn key(&self, j: usize) -> FieldElement {
        self.ladder[j]
    }

    fn key_plus(&self, j: usize, m: FieldElement) -> FieldElement {
        unreduced_add(&self.ladder[j], &m, self.cfg)
    }
}

pub(crate) struct LaneOps<'a> {
    pub cfg: &'a PrimeConfig,
    /// Ladder entries broadcast across all four lanes.
    pub ladder: &'a [PackedLanes],
}

impl BrwOps for LaneOps<'_> {
    type Elem = PackedLanes;

    fn zero(&self) -> PackedLanes {
        lane_zero()
    }

    fn add(&self, a: PackedLanes, b: PackedLanes) -> PackedLanes {
        lane_add(&a, &b, self.cfg)
    }

    fn mul(&self, a: PackedLanes, b: PackedLanes, counters: &mut OpCounters) -> PackedLanes {
        counters.lane_unreduced_mults += 1;
        lane_unreduced_mult(&a, &b, self.cfg)
    }

    fn reduce(&self, a: PackedLanes, counters: &mut OpCounters) -> PackedLanes {
        counters.lane_reductions += 1;
        lane_partial_reduce(&a, self.cfg)
    }

    fn key(&self, j: usize) -> PackedLanes {
        self.ladder[j]
    }

    fn key_plus(&self, j: usize, m: PackedLanes) -> PackedLanes {
        lane_add(&self.ladder[j], &m, self.cfg)
    }
}

/// Index of the highest ladder entry `evaluate` can touch for this many
/// blocks: floor(lg l), i.e. the ladder needs entries 0..=this.
pub fn ladder_top(block_count: usize) -> usize {
    if block_count <= 1 {
        0
    } else {
        63 - (block_count as u64).leading_zeros() as usize
    }
}

/// Builds the squaring ladder t^(2^j) for j = 0..=[`ladder_top`], counting
/// one squaring per extension step. Entries are partially reduced.
pub fn key_ladder(
    tau: &FieldElement,
    block_count: usize,
    cfg: &PrimeConfig,
    counters: &mut OpCounters,
) -> Vec<FieldElement> {
    let top = ladder_top(block_count);
    let mut ladder = Vec::with_capacity(top + 1);
    ladder.push(*tau);
    for j in 1..=top {
        counters.squarings += 1;
        ladder.push(fe_square(&ladder[j - 1], cfg));
    }
    ladder
}

/// BRW value of up to three blocks: the recursion's base cases, straight-line.
fn base<O: BrwOps>(ops: &O, blocks: &[O::Elem], counters: &mut OpCounters) -> O::Elem {
    match blocks.len() {
        1 => blocks[0],
        2 => {
            let prod = ops.mul(blocks[0], ops.key(0), counters);
            ops.add(prod, blocks[1])
        }
        3 => {
            let left = ops.key_plus(0, blocks[0]);
            let right = ops.key_plus(1, blocks[1]);
            let prod = ops.mul(left, right, counters);
            ops.add(prod, blocks[2])
        }
        n => unreachable!("base case called with {n} blocks"),
    }
}

/// BRW value of fewer than 32 blocks, unreduced.
///
/// Splitting off the largest power-of-two prefix, as the recursion does,
/// consumes the count's bits from the top: each set bit r >= 2 yields a
/// sub-evaluation of 2^r - 1 blocks, reduced and multiplied into
/// (t^(2^r) + M), and the final 0..=3 blocks are a base case. Per bit r this
/// is 2^(r-1) multiplications and 2^(r-2) reductions, so a leaf of l blocks
/// costs floor(l/2) multiplications and floor(l/4) reductions in total.
fn leaf<O: BrwOps>(ops: &O, blocks: &[O::Elem], counters: &mut OpCounters) -> O::Elem {
    let l = blocks.len();
    debug_assert!(l < 32, "leaf called with {l} blocks");
    let mut acc: Option<O::Elem> = None;
    let mut pos = 0usize;
    for r in (2..=4usize).rev() {
        if l & (1 << r) != 0 {
            let sub = leaf(ops, &blocks[pos..pos + (1 << r) - 1], counters);
            let sub = ops.reduce(sub, counters);
            let factor = ops.key_plus(r, blocks[pos + (1 << r) - 1]);
            let piece = ops.mul(sub, factor, counters);
            acc = Some(match acc {
                Some(a) => ops.add(a, piece),
                None => piece,
            });
            pos += 1 << r;
        }
    }
    let rest = l & 3;
    let tail = if rest == 0 {
        None
    } else {
        Some(base(ops, &blocks[pos..pos + rest], counters))
    };
    match (acc, tail) {
        (Some(a), Some(b)) => ops.add(a, b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => ops.zero(),
    }
}

/// The iterative BRW driver.
///
/// Full leaves hold 2^t blocks: the first 2^t - 1 are a [`leaf`], the last
/// is paired with the key power t^(2^(t + ntz(i))) for leaf number i. Before
/// the i-th leaf's multiplication, ntz(i) pending stack entries fold into it,
/// which is exactly where the recursion would have joined those subtrees.
/// The partial leaf at the end absorbs what is left on the stack: one entry
/// per set bit of the full-leaf count. A final reduction makes the result
/// fit for further multiplication.
///
/// Never more than floor(lg l) - t + 1 entries are live at once, the stack
/// is empty at the end, and the totals are floor(l/2) multiplications and
/// 1 + floor(l/4) reductions, whatever the block values.
fn drive<O: BrwOps>(
    ops: &O,
    blocks: &[O::Elem],
    t: u32,
    counters: &mut OpCounters,
) -> (O::Elem, usize) {
    debug_assert!((2..=5).contains(&t), "leaf order {t} out of range");
    let q = 1usize << t;
    let full = blocks.len() / q;
    let mut stack: Vec<O::Elem> = Vec::new();
    let mut high_water = 0usize;
    for i in 1..=full {
        let seg = &blocks[(i - 1) * q..i * q];
        let mut y = leaf(ops, &seg[..q - 1], counters);
        let j = i.trailing_zeros();
        for _ in 0..j {
            let top = stack.pop().expect("merge underflow");
            y = ops.add(y, top);
        }
        let y = ops.reduce(y, counters);
        let factor = ops.key_plus(t as usize + j as usize, seg[q - 1]);
        stack.push(ops.mul(y, factor, counters));
        high_water = high_water.max(stack.len());
    }
    let mut acc = leaf(ops, &blocks[full * q..], counters);
    for _ in 0..full.count_ones() {
        let top = stack.pop().expect("drain underflow");
        acc = ops.add(acc, top);
    }
    debug_assert!(stack.is_empty(), "evaluation stack not exhausted");
    (ops.reduce(acc, counters), high_water)
}

/// Result of one BRW evaluation.
pub struct BrwEvaluation<E> {
    /// The BRW value, partially reduced.
    pub value: E,
    /// Deepest the merge stack ever got; at most floor(lg l) - t + 1.
    pub stack_high_water: usize,
}

/// Evaluates BRW over field elements with leaves of 2^t blocks, t in 2..=5.
///
/// `ladder` must hold t^(2^j) for j = 0..=[`ladder_top`]`(blocks.len())`;
/// use [`key_ladder`] to build it.
pub fn evaluate(
    ladder: &[FieldElement],
    blocks: &[FieldElement],
    t: u32,
    cfg: &PrimeConfig,
    counters: &mut OpCounters,
) -> BrwEvaluation<FieldElement> {
    debug_assert!(ladder.len() > ladder_top(blocks.len()));
    let ops = ScalarOps { cfg, ladder };
    let (value, stack_high_water) = drive(&ops, blocks, t, counters);
    BrwEvaluation {
        value,
        stack_high_water,
    }
}

/// [`evaluate`] across four independent block streams at once. Lane i of the
/// result is the BRW value of lane i of the inputs; the ladder entries must
/// be lane broadcasts of the same key powers.
pub fn evaluate_lanes(
    ladder: &[PackedLanes],
    blocks: &[PackedLanes],
    t: u32,
    cfg: &PrimeConfig,
    counters: &mut OpCounters,
) -> BrwEvaluation<PackedLanes> {
    debug_assert!(ladder.len() > ladder_top(blocks.len()));
    let ops = LaneOps { cfg, ladder };
    let (value, stack_high_water) = drive(&ops, blocks, t, counters);
    BrwEvaluation {
        value,
        stack_high_water,
    }
}
