//! Exact verification sweeps on rank numbers: log-concavity of the level
//! sequence of `{0,..,r}^n`, the two-sided ratio bounds on consecutive
//! `{0,1,2}^n` levels together with the monotonicity of the redistribution
//! weight behind them, the LYM inequality, and the exhaustive
//! normalised-matching check on small levels.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::arith::{galois_number, int_ratio, rank_count, rank_counts, ratio_str};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::poset::RankedPoset;
use crate::report::CheckReport;
use crate::Limits;

/// `l_{i-1} l_{i+1} <= l_i^2` across the whole level sequence.
pub fn check_log_concavity(n: u64, r: u64) -> CheckReport {
    let mut report = CheckReport::new("log-concavity", n);
    report.note(&format!("r={r}"));
    let counts = rank_counts(n, r);
    for i in 1..counts.len().saturating_sub(1) {
        if &counts[i - 1] * &counts[i + 1] > &counts[i] * &counts[i] {
            report.violation(json!({"i": i}));
        }
    }
    report
}

/// The redistribution weight a level-`i` slice-`s` element receives when
/// every element one level up spreads unit weight evenly over its lower
/// covers.
fn down_weight(n: u64, i: u64, s: u64) -> BigRational {
    int_ratio((i - 2 * s) as i64, (i - s) as i64)
        + int_ratio((n + s - i) as i64, (i - s + 1) as i64)
}

/// Exact two-sided bounds on `l_{i+1}(n)/l_i(n)` near and at the middle,
/// plus the claimed monotonicity regimes of the underlying weight.
pub fn check_ratio_bounds(n: u64) -> Result<CheckReport> {
    if n < 5 {
        return Err(Error::OutOfRange(format!(
            "ratio bounds are stated for n >= 5; got {n}"
        )));
    }
    let mut report = CheckReport::new("ratio-bounds", n);
    let counts = rank_counts(n, 2);
    let ratio = |i: u64| -> BigRational {
        BigRational::new(
            BigInt::from(counts[i as usize + 1].clone()),
            BigInt::from(counts[i as usize].clone()),
        )
    };

    // interior levels 1 <= i <= n-3
    for i in 1..=n - 3 {
        let r = ratio(i);
        let lower = int_ratio((n + 1) as i64, (i + 1) as i64);
        let hi_half = i.div_ceil(2);
        let upper = int_ratio((hi_half - i / 2) as i64, hi_half as i64)
            + int_ratio((n - hi_half) as i64, (i + 2).div_ceil(2) as i64);
        if r < lower || r > upper {
            report.violation(json!({
                "lemma": "interior", "i": i, "ratio": ratio_str(&r)
            }));
        }
        // weight non-decreasing across the whole slice range
        for s in 0..i / 2 {
            if down_weight(n, i, s + 1) < down_weight(n, i, s) {
                report.violation(json!({"lemma": "interior-monotone", "i": i, "s": s}));
            }
        }
    }

    // i = n-2: single interior peak at floor((n-2)/3)
    {
        let i = n - 2;
        let r = ratio(i);
        let lower = int_ratio((n + 2) as i64, n as i64);
        let upper = int_ratio((4 * n + 7) as i64, (4 * n - 2) as i64);
        if r < lower || r > upper {
            report.violation(json!({"lemma": "below-middle", "ratio": ratio_str(&r)}));
        }
        let peak = (n - 2) / 3;
        for s in 0..i / 2 {
            let step_up = down_weight(n, i, s + 1) >= down_weight(n, i, s);
            if s < peak && !step_up {
                report.violation(json!({"lemma": "below-middle-monotone", "s": s}));
            }
            if s >= peak && step_up && down_weight(n, i, s + 1) != down_weight(n, i, s) {
                report.violation(json!({"lemma": "below-middle-monotone", "s": s}));
            }
        }
    }

    // i = n-1: strictly decreasing weight
    {
        let i = n - 1;
        let r = ratio(i);
        let lo_half = (n - 1).div_ceil(2);
        let lower = int_ratio((lo_half - (n - 1) / 2) as i64, lo_half as i64)
            + int_ratio(((n + 1) / 2) as i64, (n + 1).div_ceil(2) as i64);
        let upper = int_ratio((n + 1) as i64, n as i64);
        if r < lower || r > upper {
            report.violation(json!({"lemma": "at-middle", "ratio": ratio_str(&r)}));
        }
        for s in 0..i / 2 {
            if down_weight(n, i, s + 1) >= down_weight(n, i, s) {
                report.violation(json!({"lemma": "at-middle-monotone", "s": s}));
            }
        }
    }
    Ok(report)
}

/// Exact LYM sum of a given antichain: `sum_i |A cap L_i| / |L_i| <= 1`.
pub fn check_lym_antichain(poset: &RankedPoset, members: &[usize]) -> Result<CheckReport> {
    for (k, &a) in members.iter().enumerate() {
        for &b in &members[k + 1..] {
            if poset.comparable(a, b) {
                return Err(Error::NotAntichain);
            }
        }
    }
    let mut report = CheckReport::new("lym", poset.spec().n);
    let mut sum = BigRational::zero();
    for i in 0..=poset.top_rank() {
        let count = members
            .iter()
            .filter(|&&m| poset.rank_of(m) == i)
            .count();
        sum += int_ratio(count as i64, poset.level_len(i) as i64);
    }
    report.max_ratio = Some(ratio_str(&sum));
    if sum > BigRational::one() {
        report.violation(json!({"lym_sum": ratio_str(&sum)}));
    }
    Ok(report)
}

/// Exhaustive normalised-matching check: for every level `i` and every
/// nonempty `T` inside it, the upward shadow covers at least the
/// proportional share of the next level. Gray-code sweep with incremental
/// shadow counts; capped by the level-subset limit.
pub fn check_normalized_matching(poset: &RankedPoset, limits: &Limits) -> Result<CheckReport> {
    let mut report = CheckReport::new("normalized-matching", poset.spec().n);
    for i in 0..poset.top_rank() {
        let level: Vec<usize> = poset.level_range(i).collect();
        let k = level.len();
        if k as u32 > limits.max_level_subset_bits {
            return Err(Error::ResourceLimit(format!(
                "level {i} has {k} elements; exhaustive subset check capped at 2^{}",
                limits.max_level_subset_bits
            )));
        }
        let next: Vec<usize> = poset.level_range(i + 1).collect();
        let next_of: std::collections::HashMap<usize, usize> =
            next.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let ups: Vec<Vec<usize>> = level
            .iter()
            .map(|&g| {
                poset
                    .above(g)
                    .iter_ones()
                    .filter_map(|h| next_of.get(&h).copied())
                    .collect()
            })
            .collect();
        let li = k as u128;
        let lnext = next.len() as u128;
        let mut cover = vec![0u32; next.len()];
        let mut shadow = 0u128;
        let mut t_size = 0u128;
        let mut state = 0u64;
        for m in 1u64..(1u64 << k) {
            let flip = (m.trailing_zeros()) as usize;
            let adding = state >> flip & 1 == 0;
            state ^= 1 << flip;
            for &y in &ups[flip] {
                if adding {
                    if cover[y] == 0 {
                        shadow += 1;
                    }
                    cover[y] += 1;
                } else {
                    cover[y] -= 1;
                    if cover[y] == 0 {
                        shadow -= 1;
                    }
                }
            }
            if adding {
                t_size += 1;
            } else {
                t_size -= 1;
            }
            if shadow * li < t_size * lnext {
                report.violation(json!({
                    "i": i,
                    "subset_code": m ^ (m >> 1),
                    "t": t_size as u64,
                    "shadow": shadow as u64,
                }));
            }
        }
    }
    Ok(report)
}

/// Measured growth exponent of the subspace count: `log_q |V(q,n)| / n^2`.
/// Display-only; reported alongside the stated constant without asserting
/// either.
pub fn wilf_exponent(q: u64, n: u64) -> Result<f64> {
    let g = galois_number(n, q)?;
    let bits = g.bits() as f64;
    // refine the leading bits for a few digits of mantissa
    let approx = g.to_f64().map_or(bits * (2f64).ln(), |v| v.ln());
    Ok(approx / (q as f64).ln() / (n * n) as f64)
}

/// Middle-level indices of a materialized poset, a convenience for LYM
/// examples and witnesses.
pub fn middle_level(poset: &RankedPoset) -> Vec<usize> {
    poset.level_range(poset.top_rank() / 2).collect()
}

/// Full-level bitset.
pub fn level_bitset(poset: &RankedPoset, i: u64) -> BitSet {
    let mut s = BitSet::new(poset.len());
    for idx in poset.level_range(i) {
        s.set(idx);
    }
    s
}
