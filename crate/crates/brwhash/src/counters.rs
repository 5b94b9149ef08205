//! Operation counters threaded through the hashing paths.

use serde::Serialize;
use std::fmt;
use std::ops::AddAssign;

/// Tally of field operations performed by a hashing call.
///
/// Scalar and lane (4-wide packed) operations count separately: one lane
/// multiplication does the work of four scalar ones. `full_mults` and
/// `squarings` are multiply-then-reduce composites (key powers, stream
/// combination); they count as units because that is how the constructions
/// state their budgets.
///
/// Only the hashing layers touch counters. The primitive field operations
/// stay pure, so a counter total always reflects what the caller asked for,
/// never hidden bookkeeping.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCounters {
    /// Scalar schoolbook products left unreduced.
    pub scalar_unreduced_mults: u64,
    /// Scalar carry-chain reductions of accumulated products.
    pub scalar_reductions: u64,
    /// 4-lane packed products left unreduced.
    pub lane_unreduced_mults: u64,
    /// 4-lane packed carry-chain reductions.
    pub lane_reductions: u64,
    /// Scalar multiply-and-reduce composites.
    pub full_mults: u64,
    /// Scalar square-and-reduce composites.
    pub squarings: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.scalar_unreduced_mults += rhs.scalar_unreduced_mults;
        self.scalar_reductions += rhs.scalar_reductions;
        self.lane_unreduced_mults += rhs.lane_unreduced_mults;
        self.lane_reductions += rhs.lane_reductions;
        self.full_mults += rhs.full_mults;
        self.squarings += rhs.squarings;
    }
}

impl fmt::Display for OpCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unred_mult={} red={} lane_unred_mult={} lane_red={} full_mult={} squarings={}",
            self.scalar_unreduced_mults,
            self.scalar_reductions,
            self.lane_unreduced_mults,
            self.lane_reductions,
            self.full_mults,
            self.squarings,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_assign_sums_fields() {
        let mut a = OpCounters {
            scalar_unreduced_mults: 1,
            scalar_reductions: 2,
            lane_unreduced_mults: 3,
            lane_reductions: 4,
            full_mults: 5,
            squarings: 6,
        };
        a += a;
        assert_eq!(a.scalar_unreduced_mults, 2);
        assert_eq!(a.squarings, 12);
    }

    #[test]
    fn display_is_single_line() {
        let c = OpCounters::new();
        let s = c.to_string();
        assert!(!s.contains('\n'));
        assert!(s.contains("unred_mult=0"));
    }
}
