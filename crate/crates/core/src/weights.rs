//! The exact weight tables behind the memoryless level-uniform chain
//! distribution on `{0,1,2}^n`.
//!
//! A chain sitting at an element of level `i` with `s` coordinates equal to
//! two steps to the next level by either raising a one to a two (moving to
//! slice `s+1`, weight `w[i][s]`) or raising a zero to a one (staying in
//! slice `s`, weight `w_prime[i][s]`). The closed forms make every element
//! of level `i+1` equally likely given that every element of level `i` was.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::arith::{
    int_ratio, ratio_str, slice_count, slice_count_ge, slice_count_le, slice_range,
};
use crate::error::{Error, Result};
use crate::report::CheckReport;

#[derive(Debug, Clone)]
pub struct WeightTable {
    pub n: u64,
    level_sizes: Vec<BigRational>,
    /// `w[i][s - s_min(i)]`, the slice-raising weight.
    w: Vec<Vec<BigRational>>,
    /// `w_prime[i][s - s_min(i)]`, the slice-preserving weight.
    w_prime: Vec<Vec<BigRational>>,
}

fn level_count(n: u64, i: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(crate::arith::rank_count(n, 2, i)))
}

impl WeightTable {
    pub fn build(n: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::OutOfRange("weight table needs n >= 1".into()));
        }
        let level_sizes: Vec<BigRational> = (0..=2 * n).map(|i| level_count(n, i)).collect();
        let mut w = Vec::new();
        let mut w_prime = Vec::new();
        for i in 0..2 * n {
            let li = &level_sizes[i as usize];
            let lnext = &level_sizes[i as usize + 1];
            let mut wi = Vec::new();
            let mut wpi = Vec::new();
            for s in slice_range(n, i) {
                let slice = BigRational::from_integer(BigInt::from(slice_count(n, i, s)));
                // raising a one to a two: defined while i - 2s >= 1,
                // pinned to zero at s = i/2 for even i
                let wv = if 2 * s == i {
                    BigRational::zero()
                } else {
                    let num = li
                        * BigRational::from_integer(BigInt::from(slice_count_ge(n, i + 1, s + 1)))
                        - lnext
                            * BigRational::from_integer(BigInt::from(slice_count_ge(n, i, s + 1)));
                    let den = &slice * li * lnext * int_ratio((i - 2 * s) as i64, 1);
                    num / den
                };
                // raising a zero to a one: defined while n - i + s >= 1,
                // pinned to zero at s = i - n for i >= n
                let wpv = if i >= n && s == i - n {
                    BigRational::zero()
                } else {
                    let below = if s == 0 {
                        BigRational::zero()
                    } else {
                        BigRational::from_integer(BigInt::from(slice_count_le(n, i, s - 1)))
                    };
                    let num = li
                        * BigRational::from_integer(BigInt::from(slice_count_le(n, i + 1, s)))
                        - lnext * below;
                    let den = &slice * li * lnext * int_ratio((n + s - i) as i64, 1);
                    num / den
                };
                wi.push(wv);
                wpi.push(wpv);
            }
            w.push(wi);
            w_prime.push(wpi);
        }
        Ok(WeightTable { n, level_sizes, w, w_prime })
    }

    pub fn level_size(&self, i: u64) -> &BigRational {
        &self.level_sizes[i as usize]
    }

    /// `w[i][s]`; zero outside the stored slice range.
    pub fn w(&self, i: u64, s: u64) -> BigRational {
        self.entry(&self.w, i, s)
    }

    /// `w_prime[i][s]`; zero outside the stored slice range.
    pub fn w_prime(&self, i: u64, s: u64) -> BigRational {
        self.entry(&self.w_prime, i, s)
    }

    fn entry(&self, table: &[Vec<BigRational>], i: u64, s: u64) -> BigRational {
        if i >= 2 * self.n {
            return BigRational::zero();
        }
        let lo = i.saturating_sub(self.n);
        if s < lo || s > i / 2 {
            return BigRational::zero();
        }
        table[i as usize][(s - lo) as usize].clone()
    }

    /// Probability that the chain, at a level-`i` slice-`s` element, steps to
    /// one particular comparable element of the next level in slice `s+1`.
    pub fn step_to_two(&self, i: u64, s: u64) -> BigRational {
        self.w(i, s) * &self.level_sizes[i as usize]
    }

    /// Same, for a target in slice `s` (a zero raised to a one).
    pub fn step_to_one(&self, i: u64, s: u64) -> BigRational {
        self.w_prime(i, s) * &self.level_sizes[i as usize]
    }

    /// Exact identity sweep: non-negativity, boundary zeros, outgoing flow
    /// conservation, the incoming-weight identity, and both symmetry
    /// equations around level `n`.
    pub fn verify_identities(&self) -> CheckReport {
        let n = self.n;
        let mut report = CheckReport::new("weight-identities", n);
        for i in 0..2 * n {
            let inv_li = BigRational::one() / &self.level_sizes[i as usize];
            let inv_lnext = BigRational::one() / &self.level_sizes[i as usize + 1];
            for s in slice_range(n, i) {
                let w = self.w(i, s);
                let wp = self.w_prime(i, s);
                if w.is_negative() || wp.is_negative() {
                    report.violation(json!({"kind": "negative", "i": i, "s": s}));
                }
                if 2 * s == i && !w.is_zero() {
                    report.violation(json!({"kind": "boundary-w", "i": i, "s": s}));
                }
                if i >= n && s == i - n && !wp.is_zero() {
                    report.violation(json!({"kind": "boundary-wprime", "i": i, "s": s}));
                }
                // (i - 2s) w + (n - i + s) w' = 1/|L_i|
                let flow = int_ratio((i - 2 * s) as i64, 1) * &w
                    + int_ratio((n + s - i) as i64, 1) * &wp;
                if flow != inv_li {
                    report.violation(json!({
                        "kind": "flow", "i": i, "s": s, "got": ratio_str(&flow)
                    }));
                }
                // symmetry around level n
                if 2 * s < i {
                    let mirror = self.w_prime(2 * n - i - 1, n + s - i);
                    if mirror != w {
                        report.violation(json!({"kind": "sym1", "i": i, "s": s}));
                    }
                }
                if n + s > i {
                    let mirror = self.w(2 * n - i - 1, n + s - i - 1);
                    if mirror != wp {
                        report.violation(json!({"kind": "sym2", "i": i, "s": s}));
                    }
                }
            }
            // incoming weight at every slice of the next level:
            // t w[i][t-1] + (i + 1 - 2t) w'[i][t] = 1/|L_{i+1}|
            for t in slice_range(n, i + 1) {
                let from_two = if t == 0 {
                    BigRational::zero()
                } else {
                    int_ratio(t as i64, 1) * self.w(i, t - 1)
                };
                let from_one = if i + 1 < 2 * t {
                    BigRational::zero()
                } else {
                    int_ratio((i + 1 - 2 * t) as i64, 1) * self.w_prime(i, t)
                };
                let incoming = from_two + from_one;
                if incoming != inv_lnext {
                    report.violation(json!({
                        "kind": "incoming", "i": i, "t": t, "got": ratio_str(&incoming)
                    }));
                }
            }
        }
        report
    }

    /// Exact inequality sweep covering the pairwise weight comparison
    /// (`w' < w` below the middle), the per-step ceiling
    /// `w <= 2/((i+1)|L_{i+1}|)`, and the one-step transition bound on both
    /// halves. Hypothesis ranges outside the table's `n` are skipped and
    /// noted rather than failed.
    pub fn verify_inequalities(&self) -> CheckReport {
        let n = self.n;
        let mut report = CheckReport::new("weight-inequalities", n);
        // w' < w strictly, for 1 <= i <= n-1 and 0 <= s < i/2
        for i in 1..n {
            for s in slice_range(n, i) {
                if 2 * s >= i {
                    continue;
                }
                if self.w_prime(i, s) >= self.w(i, s) {
                    report.violation(json!({"kind": "pair-order", "i": i, "s": s}));
                }
            }
        }
        if n < 5 {
            report.note("transition ceilings need n >= 5; skipped");
            return report;
        }
        // w <= 2 / ((i+1) |L_{i+1}|)
        for i in 1..n {
            let cap = int_ratio(2, 1)
                / (int_ratio((i + 1) as i64, 1) * &self.level_sizes[i as usize + 1]);
            for s in slice_range(n, i) {
                if 2 * s >= i {
                    continue;
                }
                if self.w(i, s) > cap {
                    report.violation(json!({"kind": "w-cap", "i": i, "s": s}));
                }
            }
        }
        // one-step transition bound on every level
        for i in 0..2 * n {
            let cap = if i <= n - 1 {
                int_ratio(2, 1) * &self.level_sizes[i as usize]
                    / (int_ratio((i + 1) as i64, 1) * &self.level_sizes[i as usize + 1])
            } else {
                int_ratio(2, (2 * n - i) as i64)
            };
            for s in slice_range(n, i) {
                if i > 2 * s && self.step_to_two(i, s) > cap {
                    report.violation(json!({"kind": "one-step", "i": i, "s": s, "step": "two"}));
                }
                if n + s > i && self.step_to_one(i, s) > cap {
                    report.violation(json!({"kind": "one-step", "i": i, "s": s, "step": "one"}));
                }
            }
        }
        report
    }

    /// Forward probability sweep: starting from the bottom element and using
    /// only the step weights, every slice of every level must come out at
    /// exactly `1/|L_i|` per element.
    pub fn verify_level_uniformity(&self) -> CheckReport {
        let n = self.n;
        let mut report = CheckReport::new("mu-level-uniformity", n);
        let mut probs: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
        for i in 0..2 * n {
            let lo_next = (i + 1).saturating_sub(n);
            let lo_cur = i.saturating_sub(n);
            let mut next = Vec::new();
            for t in slice_range(n, i + 1) {
                let mut p = BigRational::zero();
                if t > 0 && t - 1 >= lo_cur && 2 * (t - 1) <= i {
                    // t ways to pick the coordinate that became the new two
                    p += int_ratio(t as i64, 1)
                        * &probs[i as usize][(t - 1 - lo_cur) as usize]
                        * self.step_to_two(i, t - 1);
                }
                if t >= lo_cur && 2 * t <= i {
                    // i + 1 - 2t ways to pick the coordinate that became one
                    p += int_ratio((i + 1 - 2 * t) as i64, 1)
                        * &probs[i as usize][(t - lo_cur) as usize]
                        * self.step_to_one(i, t);
                }
                next.push(p);
            }
            let expected = BigRational::one() / &self.level_sizes[i as usize + 1];
            for (slot, t) in (lo_next..=(i + 1) / 2).enumerate() {
                if next[slot] != expected {
                    report.violation(json!({
                        "kind": "level-uniformity",
                        "i": i + 1,
                        "s": t,
                        "got": ratio_str(&next[slot])
                    }));
                }
            }
            probs.push(next);
        }
        report
    }

    /// CSV dump with the schema `i,s,w,wprime`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,s,w,wprime\n");
        for i in 0..2 * self.n {
            for s in slice_range(self.n, i) {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i,
                    s,
                    ratio_str(&self.w(i, s)),
                    ratio_str(&self.w_prime(i, s))
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_n2_entries() {
        let t = WeightTable::build(2).unwrap();
        assert_eq!(t.w(1, 0), int_ratio(1, 3));
        assert_eq!(t.w_prime(1, 0), int_ratio(1, 6));
        assert_eq!(t.w(2, 1), BigRational::zero());
        assert_eq!(t.w_prime(2, 1), int_ratio(1, 3));
        assert_eq!(t.w(2, 0), int_ratio(1, 6));
        assert_eq!(t.w_prime(0, 0), int_ratio(1, 2));
        assert_eq!(t.w(3, 1), int_ratio(1, 2));
        assert_eq!(t.w_prime(3, 1), BigRational::zero());
        // transitions out of (1,0): one two-step, one one-step
        assert_eq!(t.step_to_two(1, 0), int_ratio(2, 3));
        assert_eq!(t.step_to_one(1, 0), int_ratio(1, 3));
    }

    #[test]
    fn identities_hold_for_small_n() {
        for n in 1..=12 {
            let t = WeightTable::build(n).unwrap();
            let rep = t.verify_identities();
            assert!(rep.passed(), "n={n}: {:?}", rep.violations);
        }
    }

    #[test]
    fn inequalities_hold_for_small_n() {
        for n in 2..=12 {
            let t = WeightTable::build(n).unwrap();
            let rep = t.verify_inequalities();
            assert!(rep.passed(), "n={n}: {:?}", rep.violations);
        }
    }

    #[test]
    fn level_uniformity_small_n() {
        for n in 1..=10 {
            let t = WeightTable::build(n).unwrap();
            assert!(t.verify_level_uniformity().passed(), "n={n}");
        }
    }

    #[test]
    fn symmetry_instance_any_n() {
        for n in 2..=9 {
            let t = WeightTable::build(n).unwrap();
            assert_eq!(t.w_prime(2 * n - 2, n - 1), t.w(1, 0));
        }
    }

    #[test]
    fn csv_rows_for_n2() {
        let t = WeightTable::build(2).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("i,s,w,wprime"));
        assert_eq!(lines.next(), Some("0,0,0/1,1/2"));
        assert_eq!(lines.next(), Some("1,0,1/3,1/6"));
    }
}
