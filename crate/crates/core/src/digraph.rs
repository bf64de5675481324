//! Comparability digraphs: an orientation picking exactly one arc per
//! comparable pair. The default rule points each arc at the element whose
//! rank is strictly closer to the middle; for the one ambiguous case, a
//! comparable pair on complementary ranks, the arc points upward.

use crate::error::{Error, Result};
use crate::poset::RankedPoset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationRule {
    TowardMiddle,
}

#[derive(Debug)]
pub struct ComparabilityDigraph<'p> {
    pub poset: &'p RankedPoset,
    pub rule: OrientationRule,
}

impl<'p> ComparabilityDigraph<'p> {
    pub fn new(poset: &'p RankedPoset, rule: OrientationRule) -> Self {
        ComparabilityDigraph { poset, rule }
    }

    /// All arcs `(tail, head)` as index pairs, iterating comparable pairs of
    /// the underlying poset once each.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let top = self.poset.top_rank();
        let mut out = Vec::new();
        for lo in 0..self.poset.len() {
            for hi in self.poset.above(lo).iter_ones() {
                // lo < hi in the poset order
                let (i, j) = (self.poset.rank_of(lo), self.poset.rank_of(hi));
                let (d_lo, d_hi) = (middle_distance(i, top), middle_distance(j, top));
                if d_hi < d_lo || d_hi == d_lo {
                    // strictly closer to the middle, or the complementary
                    // ranks i + j = top where the arc goes upward
                    out.push((lo, hi));
                } else {
                    out.push((hi, lo));
                }
            }
        }
        out
    }

    /// Audit that every comparable pair carries exactly one arc and no arc
    /// joins an incomparable pair.
    pub fn audit(&self) -> Result<()> {
        let arcs = self.arcs();
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &arcs {
            if !self.poset.comparable(a, b) {
                return Err(Error::InvalidSpec(format!(
                    "arc ({a},{b}) joins an incomparable pair"
                )));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidSpec(format!(
                    "pair {key:?} received two arcs"
                )));
            }
        }
        let comparable = self.poset.total_comparable_pairs();
        if comparable != arcs.len() as u64 {
            return Err(Error::InvalidSpec(format!(
                "{} comparable pairs but {} arcs",
                comparable,
                arcs.len()
            )));
        }
        Ok(())
    }
}

/// Twice the distance of rank `i` from the middle rank, kept integral.
fn middle_distance(i: u64, top: u64) -> u64 {
    (2 * i).abs_diff(top)
}
