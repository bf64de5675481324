//! Exact big-integer combinatorics shared by every module: binomial and
//! Gaussian binomial coefficients, the rank numbers of `{0,..,r}^n`, and
//! certified logarithm bounds used when reporting container estimates.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact binomial coefficient, 0 when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Partial row sum `binom(n, <= j)`.
pub fn binomial_le(n: u64, j: u64) -> BigUint {
    let mut acc = BigUint::zero();
    for r in 0..=j.min(n) {
        acc += binomial(n, r);
    }
    acc
}

/// Number of `i`-dimensional subspaces of an `n`-dimensional space over a
/// field with `q` elements. Every partial product below is itself a Gaussian
/// binomial, so each division is exact.
pub fn gaussian_binomial(n: u64, i: u64, q: u64) -> Result<BigUint> {
    if i > n {
        return Err(Error::OutOfRange(format!(
            "gaussian binomial index i={i} exceeds n={n}"
        )));
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for j in 0..i {
        acc *= q.pow((n - j) as u32) - 1u32;
        acc /= q.pow((j + 1) as u32) - 1u32;
    }
    Ok(acc)
}

/// Total number of subspaces of `F_q^n` (the Galois number).
pub fn galois_number(n: u64, q: u64) -> Result<BigUint> {
    let mut acc = BigUint::zero();
    for i in 0..=n {
        acc += gaussian_binomial(n, i, q)?;
    }
    Ok(acc)
}

/// Number of vectors in `{0,..,r}^n` with coordinate sum `i`, i.e. the
/// coefficient of `z^i` in `(1 + z + .. + z^r)^n`. Returns 0 outside
/// `0 <= i <= r*n`.
pub fn rank_count(n: u64, r: u64, i: u64) -> BigUint {
    if i > r * n {
        return BigUint::zero();
    }
    rank_counts(n, r)[i as usize].clone()
}

/// All rank numbers of `{0,..,r}^n` at once, by iterated convolution with
/// the length-(r+1) all-ones polynomial.
pub fn rank_counts(n: u64, r: u64) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = vec![BigUint::zero(); coeffs.len() + r as usize];
        for (i, c) in coeffs.iter().enumerate() {
            for j in 0..=r as usize {
                next[i + j] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

/// `|L_i^s|` in `{0,1,2}^n`: vectors with coordinate sum `i` and exactly `s`
/// coordinates equal to two. Zero outside `max(0, i-n) <= s <= i/2`.
pub fn slice_count(n: u64, i: u64, s: u64) -> BigUint {
    if i < s || i - s > n || 2 * s > i {
        return BigUint::zero();
    }
    binomial(n, i - s) * binomial(i - s, s)
}

/// Valid slice indices of level `i` in `{0,1,2}^n`; empty iff `i > 2n`.
pub fn slice_range(n: u64, i: u64) -> std::ops::RangeInclusive<u64> {
    i.saturating_sub(n)..=i / 2
}

/// Cumulative slice count `|L_i^{>= s}|`.
pub fn slice_count_ge(n: u64, i: u64, s: u64) -> BigUint {
    let mut acc = BigUint::zero();
    for t in s..=i / 2 {
        acc += slice_count(n, i, t);
    }
    acc
}

/// Cumulative slice count `|L_i^{<= s}|`.
pub fn slice_count_le(n: u64, i: u64, s: u64) -> BigUint {
    let mut acc = BigUint::zero();
    let mut t = i.saturating_sub(n);
    while t <= s {
        acc += slice_count(n, i, t);
        if t == s {
            break;
        }
        t += 1;
    }
    acc
}

/// Smallest integer `e` with `x <= 2^e`; requires `x > 0`.
pub fn ceil_log2(x: &BigUint) -> u64 {
    assert!(!x.is_zero(), "ceil_log2 of zero");
    let bits = x.bits();
    if x.count_ones() == 1 {
        bits - 1
    } else {
        bits
    }
}

/// Certified rational upper bound on `log2(x)` with resolution 1/64:
/// the least `p/64` such that `x^64 <= 2^p`.
pub fn log2_upper(x: &BigUint) -> BigRational {
    let p = ceil_log2(&x.pow(64));
    BigRational::new(BigInt::from(p), BigInt::from(64u32))
}

/// True when `q` is a prime power; the factorization is tiny since specs
/// only admit `q <= 16`.
pub fn is_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut base = q;
    let mut p = 2;
    while p * p <= base {
        if base % p == 0 {
            while base % p == 0 {
                base /= p;
            }
            if base != 1 {
                return None;
            }
            let mut k = 0;
            let mut m = q;
            while m > 1 {
                m /= p;
                k += 1;
            }
            return Some((p, k));
        }
        p += 1;
    }
    Some((q, 1))
}

pub fn big_ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Render a rational as the canonical `p/q` string used in every report.
pub fn ratio_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Approximate float value of a rational, for display-only fields.
pub fn ratio_f64(r: &BigRational) -> f64 {
    let digits = 18u32;
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone())).to_integer();
    scaled.to_f64().map_or(
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        },
        |v| v / 10f64.powi(digits as i32),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(10, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial_le(4, 1), BigUint::from(5u32));
    }

    #[test]
    fn gaussian_binomial_examples() {
        // (2^3 - 1)/(2 - 1) lines of F_2^3
        assert_eq!(gaussian_binomial(3, 1, 2).unwrap(), BigUint::from(7u32));
        // planes of F_2^4: 15 * 7 / (1 * 3)
        assert_eq!(gaussian_binomial(4, 2, 2).unwrap(), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(5, 0, 3).unwrap(), BigUint::one());
        assert!(gaussian_binomial(3, 4, 2).is_err());
    }

    #[test]
    fn gaussian_binomial_symmetry_and_unimodality() {
        for q in [2u64, 3, 4, 5] {
            for n in 0..=12u64 {
                let row: Vec<BigUint> = (0..=n)
                    .map(|i| gaussian_binomial(n, i, q).unwrap())
                    .collect();
                for i in 0..=n as usize {
                    assert_eq!(row[i], row[n as usize - i]);
                }
                let mid = (n / 2) as usize;
                for i in 0..mid {
                    assert!(row[i] <= row[i + 1]);
                }
            }
        }
    }

    #[test]
    fn rank_counts_match_closed_form() {
        // closed form: sum_s C(n, i-s) C(i-s, s) for r = 2
        for n in 0..=8u64 {
            let counts = rank_counts(n, 2);
            assert_eq!(counts.len() as u64, 2 * n + 1);
            for i in 0..=2 * n {
                let mut direct = BigUint::zero();
                for s in slice_range(n, i) {
                    direct += slice_count(n, i, s);
                }
                assert_eq!(counts[i as usize], direct, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(rank_count(3, 2, 3), BigUint::from(7u32));
        assert_eq!(rank_count(2, 2, 2), BigUint::from(3u32));
        assert_eq!(rank_count(5, 2, 4), BigUint::from(45u32));
        assert_eq!(rank_count(5, 2, 5), BigUint::from(51u32));
        assert_eq!(rank_count(4, 1, 2), BigUint::from(6u32));
    }

    #[test]
    fn slice_counts() {
        assert_eq!(slice_count(2, 2, 1), BigUint::from(2u32));
        assert_eq!(slice_count(3, 3, 0), BigUint::one());
        assert_eq!(slice_count(7, 0, 0), BigUint::one());
        assert_eq!(slice_count(2, 3, 0), BigUint::zero());
        // cumulative splits agree with the level total
        for n in 1..=7u64 {
            for i in 0..=2 * n {
                let total = rank_count(n, 2, i);
                assert_eq!(slice_count_ge(n, i, 0), total);
                assert_eq!(slice_count_le(n, i, i / 2), total);
            }
        }
    }

    #[test]
    fn ceil_log2_and_upper_bound() {
        assert_eq!(ceil_log2(&BigUint::from(1u32)), 0);
        assert_eq!(ceil_log2(&BigUint::from(8u32)), 3);
        assert_eq!(ceil_log2(&BigUint::from(9u32)), 4);
        let b = BigUint::from(1000u32);
        let ub = log2_upper(&b);
        // 2^ub >= 1000 > 2^(ub - 1/64)
        assert!(ub > BigRational::new(BigInt::from(996), BigInt::from(100)));
        assert!(ub < BigRational::new(BigInt::from(998), BigInt::from(100)));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(is_prime_power(2), Some((2, 1)));
        assert_eq!(is_prime_power(9), Some((3, 2)));
        assert_eq!(is_prime_power(16), Some((2, 4)));
        assert_eq!(is_prime_power(12), None);
        assert_eq!(is_prime_power(1), None);
    }

    #[test]
    fn ratio_rendering() {
        let r = big_ratio(BigUint::from(2u32), BigUint::from(6u32));
        assert_eq!(ratio_str(&r), "1/3");
        assert!((ratio_f64(&r) - 1.0 / 3.0).abs() < 1e-15);
    }
}
