//! Small finite fields GF(q) for q <= 16, backed by full add/mul tables.
//!
//! Elements are encoded as integers `0..q`. For a prime power q = p^k an
//! element's base-p digits are the coefficients of a polynomial over F_p,
//! reduced modulo a fixed irreducible polynomial, so the encoding is
//! canonical and iteration order is deterministic.

use crate::arith::is_prime_power;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GfTable {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
    neg: Vec<u8>,
}

/// Irreducible polynomials over F_p used for the extension fields we admit,
/// encoded low-degree-first without the leading monic coefficient.
fn modulus_poly(p: u64, k: u32) -> Option<Vec<u64>> {
    match (p, k) {
        (2, 2) => Some(vec![1, 1]),       // x^2 + x + 1
        (2, 3) => Some(vec![1, 1, 0]),    // x^3 + x + 1
        (2, 4) => Some(vec![1, 1, 0, 0]), // x^4 + x + 1
        (3, 2) => Some(vec![1, 0]),       // x^2 + 1
        _ => None,
    }
}

fn poly_of(x: u64, p: u64, k: u32) -> Vec<u64> {
    let mut digits = vec![0u64; k as usize];
    let mut v = x;
    for d in digits.iter_mut() {
        *d = v % p;
        v /= p;
    }
    digits
}

fn of_poly(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl GfTable {
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = is_prime_power(q)
            .ok_or_else(|| Error::InvalidSpec(format!("q={q} is not a prime power")))?;
        if q > 16 {
            return Err(Error::InvalidSpec(format!(
                "field size q={q} exceeds the supported maximum 16"
            )));
        }
        let modulus = if k == 1 {
            Vec::new()
        } else {
            modulus_poly(p, k).ok_or_else(|| {
                Error::InvalidSpec(format!("no field table for q={q}"))
            })?
        };
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            for b in 0..q {
                let (s, m) = if k == 1 {
                    ((a + b) % p, (a * b) % p)
                } else {
                    let pa = poly_of(a, p, k);
                    let pb = poly_of(b, p, k);
                    let sum: Vec<u64> =
                        pa.iter().zip(&pb).map(|(x, y)| (x + y) % p).collect();
                    // schoolbook product then reduction by the monic modulus
                    let mut prod = vec![0u64; 2 * k as usize - 1];
                    for (i, x) in pa.iter().enumerate() {
                        for (j, y) in pb.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for d in (k as usize..prod.len()).rev() {
                        let c = prod[d];
                        if c != 0 {
                            prod[d] = 0;
                            for (t, m) in modulus.iter().enumerate() {
                                let idx = d - k as usize + t;
                                prod[idx] = (prod[idx] + c * (p - m % p)) % p;
                            }
                        }
                    }
                    (of_poly(&sum, p), of_poly(&prod[..k as usize], p))
                };
                add[(a * q + b) as usize] = s as u8;
                mul[(a * q + b) as usize] = m as u8;
            }
        }
        let mut inv = vec![0u8; qs];
        let mut neg = vec![0u8; qs];
        for a in 0..q {
            for b in 0..q {
                if mul[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u8;
                }
                if add[(a * q + b) as usize] == 0 {
                    neg[a as usize] = b as u8;
                }
            }
        }
        Ok(GfTable { q, p, k, add, mul, inv, neg })
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_field_axioms(q: u64) {
        let f = GfTable::new(q).unwrap();
        let els: Vec<u8> = (0..q as u8).collect();
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                }
            }
        }
        // nonzero elements form a group: every nonzero product is nonzero
        for &a in &els[1..] {
            for &b in &els[1..] {
                assert_ne!(f.mul(a, b), 0);
            }
        }
    }

    #[test]
    fn all_supported_fields_are_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            check_field_axioms(q);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(GfTable::new(6).is_err());
        assert!(GfTable::new(1).is_err());
        assert!(GfTable::new(18).is_err());
    }
}
