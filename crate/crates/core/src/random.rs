//! Seeded randomness and the p-random subset experiments.
//!
//! Reproducibility contract: the per-trial seed is
//! `splitmix64(master ^ ((trial + 1) * 0x9E3779B97F4A7C15))` and the byte
//! stream is ChaCha12 keyed with four little-endian splitmix64 outputs of
//! that seed. Inclusion decisions and chain steps draw exact uniform
//! integers below the relevant denominator, so a rational probability is
//! honored exactly, never through floating point.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};
use serde_json::{json, Value};

use crate::arith::{ratio_f64, ratio_str};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::matching::{alternating_reach, maximum_matching};
use crate::poset::{FamilySpec, RankedPoset};
use crate::report::GENERATOR_ID;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(GOLDEN);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The documented (master seed, trial index) mix.
pub fn derive_trial_seed(master: u64, trial: u64) -> u64 {
    splitmix64(master ^ (trial.wrapping_add(1)).wrapping_mul(GOLDEN))
}

/// Deterministic byte stream with exact integer draws.
pub struct ExactRng {
    inner: ChaCha12Rng,
}

impl ExactRng {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        ExactRng { inner: ChaCha12Rng::from_seed(key) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw below `bound` by masked rejection.
    pub fn below(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero());
        if bound.is_one() {
            return BigUint::zero();
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_mask = if bits % 64 == 0 { u64::MAX } else { (1u64 << (bits % 64)) - 1 };
        loop {
            let mut raw: Vec<u64> = (0..words).map(|_| self.next_u64()).collect();
            raw[words - 1] &= top_mask;
            let mut bytes = Vec::with_capacity(words * 8);
            for w in raw {
                bytes.extend_from_slice(&w.to_le_bytes());
            }
            let candidate = BigUint::from_bytes_le(&bytes);
            if candidate < *bound {
                return candidate;
            }
        }
    }

    /// Bernoulli draw for a rational `p` in [0,1], exact.
    pub fn bernoulli(&mut self, p: &BigRational) -> bool {
        debug_assert!(!p.is_negative() && *p <= BigRational::one());
        let num = p.numer().magnitude();
        let den = p.denom().magnitude();
        self.below(den) < *num
    }

    /// Pick an index with probabilities `weights[i]/total`; the weights must
    /// sum to `total` exactly.
    pub fn pick_weighted(&mut self, weights: &[BigUint], total: &BigUint) -> usize {
        let mut draw = self.below(total);
        for (idx, w) in weights.iter().enumerate() {
            if draw < *w {
                return idx;
            }
            draw -= w;
        }
        unreachable!("weights sum to total");
    }
}

/// Parameters of one p-random subset experiment.
#[derive(Debug, Clone)]
pub struct RandomSubsetSpec {
    pub spec: FamilySpec,
    pub p: BigRational,
    pub trials: u64,
    pub master_seed: u64,
    pub epsilon: BigRational,
    /// Sweep constant the probability was derived from, when applicable.
    pub c: Option<BigRational>,
}

impl RandomSubsetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p.is_negative() || self.p > BigRational::one() {
            return Err(Error::OutOfRange("p must lie in [0,1]".into()));
        }
        if !self.epsilon.is_positive() {
            return Err(Error::OutOfRange("epsilon must be positive".into()));
        }
        Ok(())
    }
}

/// Density `p` from the sweep constant: `c/n` for the boolean and
/// `{0,..,r}^n` families, `c/floor(sqrt(q^n))` for subspaces (the floor
/// only enlarges `p`, preserving the threshold hypothesis direction).
pub fn density_from_constant(spec: FamilySpec, c: &BigRational) -> BigRational {
    use crate::poset::Family;
    let den = match spec.family {
        Family::Subspace { q } => BigUint::from(q).pow(spec.n as u32).sqrt(),
        _ => BigUint::from(spec.n.max(1)),
    };
    let p = c / BigRational::from_integer(BigInt::from(den));
    p.min(BigRational::one())
}

/// One p-random subset, deterministic per (generator, seed).
pub fn sample_random_subset(poset: &RankedPoset, p: &BigRational, seed: u64) -> BitSet {
    let mut rng = ExactRng::from_seed(seed);
    let mut out = BitSet::new(poset.len());
    for idx in 0..poset.len() {
        if rng.bernoulli(p) {
            out.set(idx);
        }
    }
    out
}

/// Maximum antichain of the induced subposet, by matching on its strict
/// comparability graph; returns the witness in global indices.
pub fn max_antichain_in(poset: &RankedPoset, subset: &BitSet) -> (u64, Vec<usize>) {
    let members: Vec<usize> = subset.iter_ones().collect();
    let local: std::collections::HashMap<usize, usize> =
        members.iter().enumerate().map(|(l, &g)| (g, l)).collect();
    let n = members.len();
    let mut adj = vec![Vec::new(); n];
    for (l, &g) in members.iter().enumerate() {
        for hi in poset.above(g).iter_ones() {
            if let Some(&lh) = local.get(&hi) {
                adj[l].push(lh);
            }
        }
    }
    let m = maximum_matching(n, n, &adj);
    let (z_left, z_right) = alternating_reach(n, &adj, &m);
    let witness: Vec<usize> = (0..n)
        .filter(|&x| z_left[x] && !z_right[x])
        .map(|x| members[x])
        .collect();
    debug_assert_eq!(witness.len(), n - m.size);
    ((n - m.size) as u64, witness)
}

/// Exhaustive maximum-independent-set oracle on the comparability graph of
/// at most 64 chosen elements; used to cross-validate the matching route.
pub fn max_antichain_exhaustive(poset: &RankedPoset, subset: &BitSet) -> u64 {
    let members: Vec<usize> = subset.iter_ones().collect();
    let n = members.len();
    assert!(n <= 64, "oracle capped at 64 elements");
    let mut adj = vec![0u64; n];
    for (a, &ga) in members.iter().enumerate() {
        for (b, &gb) in members.iter().enumerate() {
            if a != b && poset.comparable(ga, gb) {
                adj[a] |= 1 << b;
            }
        }
    }
    fn mis(adj: &[u64], candidates: u64) -> u32 {
        if candidates == 0 {
            return 0;
        }
        let v = candidates.trailing_zeros() as usize;
        let without = mis(adj, candidates & !(1 << v));
        let with = 1 + mis(adj, candidates & !(1 << v) & !adj[v]);
        without.max(with)
    }
    mis(&adj, if n == 64 { u64::MAX } else { (1u64 << n) - 1 }) as u64
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub size: u64,
    pub max_antichain: u64,
    /// Size of the constructed two-level antichain used for the tightness
    /// measurement.
    pub constructed: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub spec: RandomSubsetSpec,
    pub width: u64,
    pub per_trial: Vec<TrialOutcome>,
    pub exceed_count: u64,
    pub lower_hit_count: u64,
}

impl ExperimentReport {
    pub fn exceedance(&self) -> f64 {
        self.exceed_count as f64 / self.per_trial.len().max(1) as f64
    }

    pub fn mean_size(&self) -> f64 {
        let total: u64 = self.per_trial.iter().map(|t| t.size).sum();
        total as f64 / self.per_trial.len().max(1) as f64
    }

    pub fn lower_bound_fraction(&self) -> f64 {
        self.lower_hit_count as f64 / self.per_trial.len().max(1) as f64
    }

    /// Chernoff reference `exp(-eps^2 E / 3)` with `E = p * width`, a
    /// display-only annotation.
    pub fn chernoff_ref(&self) -> f64 {
        let expectation = &self.spec.p * BigRational::from_integer(BigInt::from(self.width));
        chernoff_bound(&self.spec.epsilon, &expectation).unwrap_or(1.0)
    }

    pub fn to_value(&self) -> Value {
        json!({
            "spec": {
                "poset": self.spec.spec,
                "p": ratio_str(&self.spec.p),
                "trials": self.spec.trials,
                "master_seed": self.spec.master_seed,
                "epsilon": ratio_str(&self.spec.epsilon),
                "c": self.spec.c.as_ref().map(|c| ratio_str(c)),
            },
            "generator": GENERATOR_ID,
            "width": self.width,
            "per_trial": self.per_trial.iter().map(|t| json!({
                "size": t.size,
                "width": t.max_antichain,
            })).collect::<Vec<_>>(),
            "exceedance": self.exceedance(),
            "mean_size": self.mean_size(),
            "lower_bound_fraction": self.lower_bound_fraction(),
            "chernoff_ref": self.chernoff_ref(),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,size,max_antichain\n");
        for (t, o) in self.per_trial.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", t, o.size, o.max_antichain));
        }
        out
    }
}

/// Run the trials: measure the largest antichain of each sampled subset,
/// count exceedances of `(1 + eps) * p * width`, and measure the two-level
/// constructed antichain against `p * width`.
pub fn run_threshold_experiment(
    poset: &RankedPoset,
    spec: &RandomSubsetSpec,
) -> Result<ExperimentReport> {
    spec.validate()?;
    let width = {
        let adj = upward_adjacency(poset);
        let m = maximum_matching(poset.len(), poset.len(), &adj);
        (poset.len() - m.size) as u64
    };
    let width_rat = BigRational::from_integer(BigInt::from(width));
    let threshold = (BigRational::one() + &spec.epsilon) * &spec.p * &width_rat;
    let lower_target = &spec.p * &width_rat;
    let mid = poset.top_rank() / 2;

    let mut per_trial = Vec::with_capacity(spec.trials as usize);
    let mut exceed_count = 0;
    let mut lower_hit_count = 0;
    for trial in 0..spec.trials {
        let seed = derive_trial_seed(spec.master_seed, trial);
        let subset = sample_random_subset(poset, &spec.p, seed);
        let (max_ac, _) = max_antichain_in(poset, &subset);
        if BigRational::from_integer(BigInt::from(max_ac)) > threshold {
            exceed_count += 1;
        }
        let constructed = two_level_antichain_size(poset, &subset, mid);
        if BigRational::from_integer(BigInt::from(constructed)) > lower_target {
            lower_hit_count += 1;
        }
        per_trial.push(TrialOutcome {
            size: subset.count() as u64,
            max_antichain: max_ac,
            constructed,
        });
    }
    Ok(ExperimentReport {
        spec: spec.clone(),
        width,
        per_trial,
        exceed_count,
        lower_hit_count,
    })
}

fn upward_adjacency(poset: &RankedPoset) -> Vec<Vec<usize>> {
    (0..poset.len())
        .map(|lo| poset.above(lo).iter_ones().collect())
        .collect()
}

/// The tightness construction: sampled middle-level elements together with
/// sampled next-level elements that dominate none of them.
fn two_level_antichain_size(poset: &RankedPoset, subset: &BitSet, mid: u64) -> u64 {
    let mut count = 0u64;
    let mid_range = poset.level_range(mid);
    for idx in mid_range.clone() {
        if subset.get(idx) {
            count += 1;
        }
    }
    if mid == poset.top_rank() {
        return count;
    }
    for idx in poset.level_range(mid + 1) {
        if !subset.get(idx) {
            continue;
        }
        let covered = mid_range
            .clone()
            .any(|lo| subset.get(lo) && poset.above(lo).get(idx));
        if !covered {
            count += 1;
        }
    }
    count
}

/// The two-regime exponential tail bound used as a report annotation.
pub fn chernoff_bound(delta: &BigRational, expectation: &BigRational) -> Result<f64> {
    if !delta.is_positive() {
        return Err(Error::OutOfRange("delta must be positive".into()));
    }
    if expectation.is_negative() {
        return Err(Error::OutOfRange("expectation must be nonnegative".into()));
    }
    let d = ratio_f64(delta);
    let e = ratio_f64(expectation);
    let exponent = if d < 1.0 { d * d * e / 3.0 } else { d * e / 3.0 };
    Ok((-exponent).exp())
}
