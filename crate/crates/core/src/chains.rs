//! Chain distributions on ranked posets: the uniform maximal-chain
//! distributions on the boolean and subspace lattices, and the memoryless
//! level-uniform distribution on `{0,1,2}^n` driven by [`WeightTable`].
//!
//! Conditional probabilities for the latter run over interval profiles: for
//! a fixed start element only the counts of coordinates raised 0->1, 0->2
//! and 1->2 matter, so one dynamic program per start profile covers every
//! comparable pair above it.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::arith::{big_ratio, gaussian_binomial, rank_count, ratio_str, slice_range};
use crate::error::{Error, Result};
use crate::poset::{ElementCode, Family, FamilyOps, FamilySpec, RankedPoset, Relation};
use crate::random::ExactRng;
use crate::report::CheckReport;
use crate::weights::WeightTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    /// Uniformly random maximal chain; level-uniform on the boolean and
    /// subspace lattices.
    UniformMaximal,
    /// The weight-table distribution on `{0,1,2}^n`.
    MuMultiset,
}

#[derive(Debug, Clone)]
pub struct ChainDistribution {
    ops: FamilyOps,
    kind: DistKind,
    mu: Option<WeightTable>,
}

impl ChainDistribution {
    /// Uniform maximal chains; rejected on `{0,..,r}^n`, where they are not
    /// level-uniform and the weight-table distribution is the right tool.
    pub fn uniform_maximal(spec: FamilySpec) -> Result<Self> {
        if matches!(spec.family, Family::RPower { .. }) {
            return Err(Error::InvalidSpec(
                "uniform maximal chains are not level-uniform on rpower posets; use mu".into(),
            ));
        }
        Ok(ChainDistribution {
            ops: FamilyOps::new(spec)?,
            kind: DistKind::UniformMaximal,
            mu: None,
        })
    }

    /// The memoryless level-uniform distribution on `{0,1,2}^n`.
    pub fn mu(n: u64) -> Result<Self> {
        let spec = FamilySpec::rpower(2, n);
        Ok(ChainDistribution {
            ops: FamilyOps::new(spec)?,
            kind: DistKind::MuMultiset,
            mu: Some(WeightTable::build(n)?),
        })
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn spec(&self) -> FamilySpec {
        self.ops.spec
    }

    pub fn weight_table(&self) -> Option<&WeightTable> {
        self.mu.as_ref()
    }

    fn n(&self) -> u64 {
        self.ops.spec.n
    }

    /// Probability that the chain, at `x`, steps to the particular upper
    /// cover `y`.
    pub fn transition_probability(
        &self,
        x: &ElementCode,
        y: &ElementCode,
    ) -> Result<BigRational> {
        let i = self.ops.rank(x);
        if self.ops.rank(y) != i + 1 || self.ops.relation(x, y)? != Relation::Below {
            return Err(Error::NotComparable(
                self.ops.encode(x),
                self.ops.encode(y),
            ));
        }
        match self.kind {
            DistKind::UniformMaximal => match self.ops.spec.family {
                Family::Boolean => Ok(big_ratio(BigUint::one(), BigUint::from(self.n() - i))),
                Family::Subspace { q } => {
                    // covers of a dim-i subspace: one per line of the quotient
                    let covers = gaussian_binomial(self.n() - i, 1, q)?;
                    Ok(big_ratio(BigUint::one(), covers))
                }
                Family::RPower { .. } => unreachable!(),
            },
            DistKind::MuMultiset => {
                let table = self.mu.as_ref().unwrap();
                let s = self.ops.twos(x);
                if self.ops.twos(y) == s + 1 {
                    Ok(table.step_to_two(i, s))
                } else {
                    Ok(table.step_to_one(i, s))
                }
            }
        }
    }

    /// `P(x in C)` by the level-collapsed forward dynamic program; comes out
    /// to exactly `1/|L_rank|` for every kind here.
    pub fn element_probability(&self, x: &ElementCode) -> Result<BigRational> {
        let rank = self.ops.rank(x);
        match self.kind {
            DistKind::UniformMaximal => Ok(self.uniform_rank_probability(rank)?),
            DistKind::MuMultiset => Ok(self.mu_slice_probability(rank, self.ops.twos(x))),
        }
    }

    /// Forward DP over ranks for the uniform kinds: every element of the
    /// next level receives from all its lower covers.
    fn uniform_rank_probability(&self, rank: u64) -> Result<BigRational> {
        let n = self.n();
        let mut p = BigRational::one();
        for j in 0..rank {
            let (covers_below, step_den) = match self.ops.spec.family {
                Family::Boolean => (BigUint::from(j + 1), BigUint::from(n - j)),
                Family::Subspace { q } => (
                    gaussian_binomial(j + 1, 1, q)?,
                    gaussian_binomial(n - j, 1, q)?,
                ),
                Family::RPower { .. } => unreachable!(),
            };
            p *= big_ratio(covers_below, step_den);
        }
        Ok(p)
    }

    /// Forward DP over (level, slice) states for mu.
    fn mu_slice_probability(&self, rank: u64, twos: u64) -> BigRational {
        let table = self.mu.as_ref().unwrap();
        let n = self.n();
        let mut cur = vec![BigRational::one()]; // level 0, slice 0
        for i in 0..rank {
            let lo_cur = i.saturating_sub(n);
            let lo_next = (i + 1).saturating_sub(n);
            let mut next = Vec::new();
            for t in slice_range(n, i + 1) {
                let mut p = BigRational::zero();
                if t > 0 && t - 1 >= lo_cur && 2 * (t - 1) <= i {
                    p += BigRational::from_integer(BigInt::from(t))
                        * &cur[(t - 1 - lo_cur) as usize]
                        * table.step_to_two(i, t - 1);
                }
                if t >= lo_cur && 2 * t <= i {
                    p += BigRational::from_integer(BigInt::from(i + 1 - 2 * t))
                        * &cur[(t - lo_cur) as usize]
                        * table.step_to_one(i, t);
                }
                next.push(p);
            }
            let _ = lo_next;
            cur = next;
        }
        let lo = rank.saturating_sub(n);
        cur[(twos - lo) as usize].clone()
    }

    /// `P(y in C | x in C)` for any comparable pair, either direction.
    /// Downward conditionals come from Bayes inversion on the exact level
    /// probabilities.
    pub fn conditional_probability(
        &self,
        x: &ElementCode,
        y: &ElementCode,
    ) -> Result<BigRational> {
        match self.ops.relation(x, y)? {
            Relation::Below => self.upward_conditional(x, y),
            Relation::Above => {
                let up = self.upward_conditional(y, x)?;
                let py = self.element_probability(y)?;
                let px = self.element_probability(x)?;
                Ok(up * py / px)
            }
            Relation::Equal | Relation::Incomparable => Err(Error::NotComparable(
                self.ops.encode(x),
                self.ops.encode(y),
            )),
        }
    }

    fn upward_conditional(&self, x: &ElementCode, y: &ElementCode) -> Result<BigRational> {
        let (i, j) = (self.ops.rank(x), self.ops.rank(y));
        match self.kind {
            DistKind::UniformMaximal => match self.ops.spec.family {
                // the chain above x is a uniform maximal chain of the upper
                // interval, so the hit probability is one over the count of
                // rank-(j-i) elements there
                Family::Boolean => Ok(big_ratio(
                    BigUint::one(),
                    crate::arith::binomial(self.n() - i, j - i),
                )),
                Family::Subspace { q } => Ok(big_ratio(
                    BigUint::one(),
                    gaussian_binomial(self.n() - i, j - i, q)?,
                )),
                Family::RPower { .. } => unreachable!(),
            },
            DistKind::MuMultiset => {
                let (ElementCode::Digits(dx), ElementCode::Digits(dy)) = (x, y) else {
                    return Err(Error::FamilyMismatch);
                };
                let table = self.mu.as_ref().unwrap();
                let profile = IntervalProfile::of(dx, dy);
                let cond = MuConditionals::build(table, i, self.ops.twos(x));
                Ok(cond.get(&profile).clone())
            }
        }
    }

    /// A maximal chain from bottom to top, deterministic per (generator,
    /// seed). Steps are sampled exactly against the rational transition
    /// probabilities.
    pub fn sample_chain(&self, seed: u64) -> Result<Vec<ElementCode>> {
        let mut rng = ExactRng::from_seed(seed);
        let mut cur = self.ops.bottom();
        let mut chain = vec![cur.clone()];
        let top = self.ops.spec.top_rank();
        for _ in 0..top {
            cur = self.step(&cur, &mut rng)?;
            chain.push(cur.clone());
        }
        Ok(chain)
    }

    fn step(&self, cur: &ElementCode, rng: &mut ExactRng) -> Result<ElementCode> {
        match self.kind {
            DistKind::UniformMaximal => {
                let ups = self.ops.covers_above(cur);
                let pick = rng.below(&BigUint::from(ups.len() as u64));
                let pick = usize::try_from(pick.to_u64_digits().first().copied().unwrap_or(0))
                    .expect("cover count fits usize");
                Ok(ups[pick].clone())
            }
            DistKind::MuMultiset => {
                let ElementCode::Digits(digits) = cur else {
                    return Err(Error::FamilyMismatch);
                };
                let table = self.mu.as_ref().unwrap();
                let i = self.ops.rank(cur);
                let s = self.ops.twos(cur);
                let to_two = table.step_to_two(i, s);
                let to_one = table.step_to_one(i, s);
                let den = to_two.denom().magnitude() * to_one.denom().magnitude();
                let num_two = (&to_two * BigRational::from_integer(BigInt::from(den.clone())))
                    .to_integer()
                    .magnitude()
                    .clone();
                let num_one = (&to_one * BigRational::from_integer(BigInt::from(den.clone())))
                    .to_integer()
                    .magnitude()
                    .clone();
                let mut weights = Vec::new();
                let mut moves = Vec::new();
                for (c, &d) in digits.iter().enumerate() {
                    match d {
                        0 => {
                            weights.push(num_one.clone());
                            moves.push(c);
                        }
                        1 => {
                            weights.push(num_two.clone());
                            moves.push(c);
                        }
                        _ => {}
                    }
                }
                let pick = rng.pick_weighted(&weights, &den);
                let mut next = digits.clone();
                next[moves[pick]] += 1;
                Ok(ElementCode::Digits(next))
            }
        }
    }
}

/// Counts of coordinate moves between two comparable `{0,1,2}^n` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalProfile {
    /// zeros of the base raised to one
    pub z1: u64,
    /// zeros of the base raised to two
    pub z2: u64,
    /// ones of the base raised to two
    pub o2: u64,
}

impl IntervalProfile {
    pub fn of(base: &[u8], upper: &[u8]) -> Self {
        let mut p = IntervalProfile { z1: 0, z2: 0, o2: 0 };
        for (&b, &u) in base.iter().zip(upper) {
            match (b, u) {
                (0, 1) => p.z1 += 1,
                (0, 2) => p.z2 += 1,
                (1, 2) => p.o2 += 1,
                _ => debug_assert!(b == u, "profile of a non-comparable pair"),
            }
        }
        p
    }

    pub fn rank_gap(&self) -> u64 {
        self.z1 + 2 * self.z2 + self.o2
    }
}

/// All upward conditionals out of one start profile, indexed by interval
/// profile. `get` returns `P(y in C | x in C)` for any y above an x with
/// the table's start rank and two-count.
#[derive(Debug)]
pub struct MuConditionals {
    nz: u64,
    no: u64,
    h: Vec<BigRational>,
}

impl MuConditionals {
    pub fn build(table: &WeightTable, base_rank: u64, base_twos: u64) -> Self {
        let n = table.n;
        let nz = (n + base_twos) - base_rank;
        let no = base_rank - 2 * base_twos;
        let dim = ((nz + 1) * (nz + 1) * (no + 1)) as usize;
        let mut h = vec![BigRational::zero(); dim];
        let index = |z1: u64, z2: u64, o2: u64| -> usize {
            ((z1 * (nz + 1) + z2) * (no + 1) + o2) as usize
        };
        h[index(0, 0, 0)] = BigRational::one();
        // process states by increasing rank offset
        let max_d = 2 * nz + no;
        for d in 1..=max_d {
            for z1 in 0..=nz {
                for z2 in 0..=(nz - z1) {
                    for o2 in 0..=no {
                        if z1 + 2 * z2 + o2 != d {
                            continue;
                        }
                        let r_prev = base_rank + d - 1;
                        if r_prev >= 2 * n {
                            continue;
                        }
                        let s_target = base_twos + z2 + o2;
                        let mut acc = BigRational::zero();
                        if z1 >= 1 {
                            acc += BigRational::from_integer(BigInt::from(z1))
                                * &h[index(z1 - 1, z2, o2)]
                                * table.step_to_one(r_prev, s_target);
                        }
                        if z2 >= 1 {
                            acc += BigRational::from_integer(BigInt::from(z2))
                                * &h[index(z1 + 1, z2 - 1, o2)]
                                * table.step_to_two(r_prev, s_target - 1);
                        }
                        if o2 >= 1 {
                            acc += BigRational::from_integer(BigInt::from(o2))
                                * &h[index(z1, z2, o2 - 1)]
                                * table.step_to_two(r_prev, s_target - 1);
                        }
                        h[index(z1, z2, o2)] = acc;
                    }
                }
            }
        }
        MuConditionals { nz, no, h }
    }

    pub fn get(&self, profile: &IntervalProfile) -> &BigRational {
        assert!(
            profile.z1 + profile.z2 <= self.nz && profile.o2 <= self.no,
            "profile outside the start element's coordinate budget"
        );
        &self.h[((profile.z1 * (self.nz + 1) + profile.z2) * (self.no + 1) + profile.o2) as usize]
    }
}

/// The three hypotheses on a rank pair `(i, j)`: gap at least `k`, both
/// ranks away from one end, and `j` at least as close to the middle.
pub fn conditional_hypotheses(n: u64, k: u64, i: u64, j: u64) -> bool {
    i.abs_diff(j) >= k
        && (i.min(j) >= 2 * k || i.max(j) + 2 * k <= 2 * n)
        && j.abs_diff(n) <= i.abs_diff(n)
}

/// Exact sweep of every conditional probability that the rank-pair
/// hypotheses admit, against the threshold `1/(l_{3k-1}/l_{2k-1} - 1)`.
/// Violations are recorded, not fatal: the bound only promises to hold for
/// n large with respect to k, and the report's `max_ratio` tracks how close
/// the sweep came.
pub fn verify_conditional_bound(n: u64, k: u64) -> Result<CheckReport> {
    if k < 1 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    if 3 * k - 1 > 2 * n {
        return Err(Error::OutOfRange(format!(
            "threshold needs 3k-1 <= 2n; got k={k}, n={n}"
        )));
    }
    let table = WeightTable::build(n)?;
    let denom = big_ratio(rank_count(n, 2, 3 * k - 1), rank_count(n, 2, 2 * k - 1))
        - BigRational::one();
    if !denom.is_positive() {
        return Err(Error::OutOfRange(
            "threshold denominator vanishes at this n".into(),
        ));
    }
    let bound = BigRational::one() / &denom;
    let mut report = CheckReport::new("conditional-bound", n);
    let mut max_ratio = BigRational::zero();
    for base_rank in 0..2 * n {
        for base_twos in slice_range(n, base_rank) {
            let cond = MuConditionals::build(&table, base_rank, base_twos);
            let nz = (n + base_twos) - base_rank;
            let no = base_rank - 2 * base_twos;
            for z1 in 0..=nz {
                for z2 in 0..=(nz - z1) {
                    for o2 in 0..=no {
                        let d = z1 + 2 * z2 + o2;
                        if d == 0 {
                            continue;
                        }
                        let upper_rank = base_rank + d;
                        let profile = IntervalProfile { z1, z2, o2 };
                        let up = cond.get(&profile);
                        let mut consider = |i: u64, j: u64, value: &BigRational| {
                            if !conditional_hypotheses(n, k, i, j) {
                                return;
                            }
                            let ratio = value / &bound;
                            if ratio > max_ratio {
                                max_ratio = ratio.clone();
                            }
                            if value > &bound {
                                report.violations.push(json!({
                                    "i": i,
                                    "j": j,
                                    "base_twos": base_twos,
                                    "profile": [z1, z2, o2],
                                    "conditional": ratio_str(value),
                                }));
                            }
                        };
                        // x below, y above
                        consider(base_rank, upper_rank, up);
                        // x above, y below, via Bayes inversion
                        let down = up
                            * big_ratio(
                                rank_count(n, 2, upper_rank),
                                rank_count(n, 2, base_rank),
                            );
                        consider(upper_rank, base_rank, &down);
                    }
                }
            }
        }
    }
    report.max_ratio = Some(ratio_str(&max_ratio));
    report.note(&format!("threshold {}", ratio_str(&bound)));
    Ok(report)
}

/// Every maximal chain with its probability, by walking cover steps from
/// the bottom. Factorial-sized; the independent oracle for small n.
pub fn enumerate_chains(
    dist: &ChainDistribution,
    poset: &RankedPoset,
) -> Result<Vec<(Vec<usize>, BigRational)>> {
    if poset.spec() != dist.spec() {
        return Err(Error::FamilyMismatch);
    }
    if poset.len() > 256 {
        return Err(Error::ResourceLimit(
            "chain enumeration is an oracle for small posets only".into(),
        ));
    }
    let bottom = poset
        .index_of(&poset.ops.bottom())
        .expect("bottom is materialized");
    let mut out = Vec::new();
    let mut stack = vec![(vec![bottom], BigRational::one())];
    while let Some((chain, prob)) = stack.pop() {
        let last = *chain.last().unwrap();
        if poset.rank_of(last) == poset.top_rank() {
            out.push((chain, prob));
            continue;
        }
        let covers = poset.ops.covers_above(&poset.elements[last]);
        for up in covers {
            let t = dist.transition_probability(&poset.elements[last], &up)?;
            if t.is_zero() {
                continue;
            }
            let idx = poset.index_of(&up).expect("cover is materialized");
            let mut next = chain.clone();
            next.push(idx);
            stack.push((next, &prob * t));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_ratio;
    use crate::Limits;

    fn rposet(spec: FamilySpec) -> RankedPoset {
        RankedPoset::build(spec, &Limits::default()).unwrap()
    }

    fn digits(ops: &FamilyOps, s: &str) -> ElementCode {
        ops.decode(s).unwrap()
    }

    #[test]
    fn mu_transition_examples_n2() {
        let dist = ChainDistribution::mu(2).unwrap();
        let ops = FamilyOps::new(FamilySpec::rpower(2, 2)).unwrap();
        let x = digits(&ops, "10");
        assert_eq!(
            dist.transition_probability(&x, &digits(&ops, "20")).unwrap(),
            int_ratio(2, 3)
        );
        assert_eq!(
            dist.transition_probability(&x, &digits(&ops, "11")).unwrap(),
            int_ratio(1, 3)
        );
        // not an upper cover
        assert!(dist
            .transition_probability(&x, &digits(&ops, "22"))
            .is_err());
    }

    #[test]
    fn uniform_boolean_transitions() {
        let dist = ChainDistribution::uniform_maximal(FamilySpec::boolean(3)).unwrap();
        let ops = FamilyOps::new(FamilySpec::boolean(3)).unwrap();
        let x = digits(&ops, "100");
        let y = digits(&ops, "110");
        assert_eq!(dist.transition_probability(&x, &y).unwrap(), int_ratio(1, 2));
    }

    #[test]
    fn element_probabilities_are_level_uniform() {
        // DP route must give exactly 1/|L_i| for all kinds
        let cases: Vec<(ChainDistribution, FamilySpec)> = vec![
            (
                ChainDistribution::uniform_maximal(FamilySpec::boolean(5)).unwrap(),
                FamilySpec::boolean(5),
            ),
            (
                ChainDistribution::uniform_maximal(FamilySpec::subspace(2, 4)).unwrap(),
                FamilySpec::subspace(2, 4),
            ),
            (ChainDistribution::mu(3).unwrap(), FamilySpec::rpower(2, 3)),
        ];
        for (dist, spec) in cases {
            let p = rposet(spec);
            for idx in 0..p.len() {
                let got = dist.element_probability(&p.elements[idx]).unwrap();
                let expect = BigRational::one()
                    / BigRational::from_integer(BigInt::from(
                        spec.level_size(p.rank_of(idx)).unwrap(),
                    ));
                assert_eq!(got, expect, "{spec} idx {idx}");
            }
        }
    }

    #[test]
    fn mu_conditional_frozen_n2() {
        // P((2,1) | (1,0)) = 2/3 * 1 + 1/3 * 1/2 = 5/6, hand-evaluated
        let dist = ChainDistribution::mu(2).unwrap();
        let ops = FamilyOps::new(FamilySpec::rpower(2, 2)).unwrap();
        let x = digits(&ops, "10");
        let y = digits(&ops, "21");
        assert_eq!(dist.conditional_probability(&x, &y).unwrap(), int_ratio(5, 6));
        // consecutive levels equal the transition
        assert_eq!(
            dist.conditional_probability(&x, &digits(&ops, "20")).unwrap(),
            int_ratio(2, 3)
        );
    }

    #[test]
    fn uniform_boolean_conditionals_closed_form() {
        let dist = ChainDistribution::uniform_maximal(FamilySpec::boolean(4)).unwrap();
        let ops = FamilyOps::new(FamilySpec::boolean(4)).unwrap();
        // bottom to top is certain
        assert_eq!(
            dist.conditional_probability(&digits(&ops, "0000"), &digits(&ops, "1111"))
                .unwrap(),
            BigRational::one()
        );
        // two subsets of sizes 1 < 3
        assert_eq!(
            dist.conditional_probability(&digits(&ops, "1000"), &digits(&ops, "1110"))
                .unwrap(),
            int_ratio(1, 3)
        );
        // downward: P({1} | {1,2,3}) = 1/3 by Bayes
        assert_eq!(
            dist.conditional_probability(&digits(&ops, "1110"), &digits(&ops, "1000"))
                .unwrap(),
            int_ratio(1, 3)
        );
    }

    #[test]
    fn conditionals_match_chain_enumeration_oracle() {
        // factorial-cost oracle on small posets, all comparable pairs
        let cases: Vec<(ChainDistribution, FamilySpec)> = vec![
            (
                ChainDistribution::uniform_maximal(FamilySpec::boolean(4)).unwrap(),
                FamilySpec::boolean(4),
            ),
            (
                ChainDistribution::uniform_maximal(FamilySpec::subspace(2, 3)).unwrap(),
                FamilySpec::subspace(2, 3),
            ),
            (ChainDistribution::mu(2).unwrap(), FamilySpec::rpower(2, 2)),
            (ChainDistribution::mu(3).unwrap(), FamilySpec::rpower(2, 3)),
        ];
        for (dist, spec) in cases {
            let p = rposet(spec);
            let chains = enumerate_chains(&dist, &p).unwrap();
            let total: BigRational = chains.iter().map(|(_, pr)| pr.clone()).sum();
            assert_eq!(total, BigRational::one(), "{spec} chain mass");
            let hit = |idx: usize| -> BigRational {
                chains
                    .iter()
                    .filter(|(c, _)| c.contains(&idx))
                    .map(|(_, pr)| pr.clone())
                    .sum()
            };
            for a in 0..p.len() {
                let pa = hit(a);
                assert_eq!(
                    pa,
                    dist.element_probability(&p.elements[a]).unwrap(),
                    "{spec} element {a}"
                );
                for b in p.above(a).iter_ones() {
                    let joint: BigRational = chains
                        .iter()
                        .filter(|(c, _)| c.contains(&a) && c.contains(&b))
                        .map(|(_, pr)| pr.clone())
                        .sum();
                    let expect_up = &joint / &pa;
                    assert_eq!(
                        dist.conditional_probability(&p.elements[a], &p.elements[b])
                            .unwrap(),
                        expect_up,
                        "{spec} pair ({a},{b})"
                    );
                    let pb = hit(b);
                    let expect_down = &joint / &pb;
                    assert_eq!(
                        dist.conditional_probability(&p.elements[b], &p.elements[a])
                            .unwrap(),
                        expect_down,
                        "{spec} pair ({b},{a})"
                    );
                }
            }
        }
    }

    #[test]
    fn memorylessness_exhaustive_small() {
        // P(z3 | z1, z2 in C) = P(z3 | z2 in C) over all chains z1<z2<z3
        for n in [2u64, 3] {
            let dist = ChainDistribution::mu(n).unwrap();
            let p = rposet(FamilySpec::rpower(2, n));
            let chains = enumerate_chains(&dist, &p).unwrap();
            let mass = |pred: &dyn Fn(&[usize]) -> bool| -> BigRational {
                chains
                    .iter()
                    .filter(|(c, _)| pred(c))
                    .map(|(_, pr)| pr.clone())
                    .sum()
            };
            for z1 in 0..p.len() {
                for z2 in p.above(z1).iter_ones() {
                    for z3 in p.above(z2).iter_ones() {
                        let joint12 = mass(&|c| c.contains(&z1) && c.contains(&z2));
                        if joint12.is_zero() {
                            continue;
                        }
                        let all = mass(&|c| {
                            c.contains(&z1) && c.contains(&z2) && c.contains(&z3)
                        });
                        let cond_pair = all / &joint12;
                        let cond_single = dist
                            .conditional_probability(&p.elements[z2], &p.elements[z3])
                            .unwrap();
                        assert_eq!(cond_pair, cond_single, "n={n} ({z1},{z2},{z3})");
                    }
                }
            }
        }
    }

    #[test]
    fn sampling_chain_determinism_and_unique_chain() {
        let dist = ChainDistribution::mu(1).unwrap();
        let chain = dist.sample_chain(123).unwrap();
        let ops = FamilyOps::new(FamilySpec::rpower(2, 1)).unwrap();
        let expect: Vec<ElementCode> =
            ["0", "1", "2"].iter().map(|s| digits(&ops, s)).collect();
        assert_eq!(chain, expect);
        let dist = ChainDistribution::mu(4).unwrap();
        assert_eq!(
            dist.sample_chain(42).unwrap(),
            dist.sample_chain(42).unwrap()
        );
        let boolean = ChainDistribution::uniform_maximal(FamilySpec::boolean(6)).unwrap();
        let c = boolean.sample_chain(7).unwrap();
        assert_eq!(c.len(), 7);
        for w in c.windows(2) {
            let ops = FamilyOps::new(FamilySpec::boolean(6)).unwrap();
            assert_eq!(ops.relation(&w[0], &w[1]).unwrap(), Relation::Below);
        }
    }

    #[test]
    fn sampled_frequencies_match_exact_probability() {
        // P((1,1) in C) = 1/3 at n = 2; 10^5 samples within 3 sigma
        let dist = ChainDistribution::mu(2).unwrap();
        let ops = FamilyOps::new(FamilySpec::rpower(2, 2)).unwrap();
        let target = digits(&ops, "11");
        let trials = 100_000u64;
        let mut hits = 0u64;
        for t in 0..trials {
            let seed = crate::random::derive_trial_seed(2024, t);
            if dist.sample_chain(seed).unwrap().contains(&target) {
                hits += 1;
            }
        }
        let freq = hits as f64 / trials as f64;
        let sigma = ((1.0 / 3.0) * (2.0 / 3.0) / trials as f64).sqrt();
        assert!((freq - 1.0 / 3.0).abs() < 3.0 * sigma, "freq {freq}");
    }

    #[test]
    fn conditional_bound_hypothesis_filter() {
        // i = j fails the gap hypothesis
        assert!(!conditional_hypotheses(6, 1, 4, 4));
        assert!(conditional_hypotheses(6, 1, 2, 3));
        // near the bottom with the top far: allowed through the max clause
        assert!(conditional_hypotheses(6, 1, 1, 2));
        // both hypotheses fail: min < 2k and max > 2n-2k
        assert!(!conditional_hypotheses(3, 2, 1, 5));
    }

    #[test]
    fn conditional_bound_report_shape() {
        let rep = verify_conditional_bound(6, 1).unwrap();
        assert!(rep.max_ratio.is_some());
        // threshold note carries the exact rational 2/(n-1)
        assert!(rep.notes[0].contains("2/5"));
    }

    #[test]
    fn rpower_uniform_maximal_rejected() {
        assert!(ChainDistribution::uniform_maximal(FamilySpec::rpower(2, 3)).is_err());
    }
}
