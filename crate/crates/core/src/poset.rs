//! The three poset families: the boolean lattice on subsets of `[n]`, the
//! lattice of subspaces of `F_q^n` ordered by inclusion, and the coordinate
//! order on `{0,..,r}^n`. Elements carry a canonical encoding so equality,
//! iteration order and report output are deterministic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, galois_number, gaussian_binomial, is_prime_power, rank_count};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::gf::GfTable;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Boolean,
    Subspace { q: u64 },
    RPower { r: u64 },
}

/// Which poset to build: family plus ground dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub n: u64,
}

impl FamilySpec {
    pub fn boolean(n: u64) -> Self {
        FamilySpec { family: Family::Boolean, n }
    }

    pub fn subspace(q: u64, n: u64) -> Self {
        FamilySpec { family: Family::Subspace { q }, n }
    }

    pub fn rpower(r: u64, n: u64) -> Self {
        FamilySpec { family: Family::RPower { r }, n }
    }

    pub fn validate(&self) -> Result<()> {
        match self.family {
            Family::Boolean => {
                if self.n > 63 {
                    return Err(Error::InvalidSpec(format!(
                        "boolean n={} exceeds 63",
                        self.n
                    )));
                }
            }
            Family::Subspace { q } => {
                if is_prime_power(q).is_none() || q > 16 {
                    return Err(Error::InvalidSpec(format!(
                        "subspace q={q} must be a prime power at most 16"
                    )));
                }
            }
            Family::RPower { r } => {
                if r < 1 {
                    return Err(Error::InvalidSpec("rpower requires r >= 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Rank of the top element.
    pub fn top_rank(&self) -> u64 {
        match self.family {
            Family::Boolean | Family::Subspace { .. } => self.n,
            Family::RPower { r } => r * self.n,
        }
    }

    pub fn ground_size(&self) -> Result<BigUint> {
        Ok(match self.family {
            Family::Boolean => BigUint::one() << self.n,
            Family::Subspace { q } => galois_number(self.n, q)?,
            Family::RPower { r } => BigUint::from(r + 1).pow(self.n as u32),
        })
    }

    /// Exact size of level `i` from the closed forms.
    pub fn level_size(&self, i: u64) -> Result<BigUint> {
        if i > self.top_rank() {
            return Err(Error::OutOfRange(format!(
                "level {i} out of range 0..={}",
                self.top_rank()
            )));
        }
        Ok(match self.family {
            Family::Boolean => binomial(self.n, i),
            Family::Subspace { q } => gaussian_binomial(self.n, i, q)?,
            Family::RPower { r } => rank_count(self.n, r, i),
        })
    }

    pub fn level_sizes(&self) -> Result<Vec<BigUint>> {
        (0..=self.top_rank()).map(|i| self.level_size(i)).collect()
    }
}

impl Serialize for FamilySpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self.family {
            Family::Boolean => m.serialize_entry("family", "boolean")?,
            Family::Subspace { q } => {
                m.serialize_entry("family", "subspace")?;
                m.serialize_entry("q", &q)?;
            }
            Family::RPower { r } => {
                m.serialize_entry("family", "rpower")?;
                m.serialize_entry("r", &r)?;
            }
        }
        m.serialize_entry("n", &self.n)?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for FamilySpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            family: String,
            n: u64,
            q: Option<u64>,
            r: Option<u64>,
        }
        let raw = Raw::deserialize(d)?;
        let family = match raw.family.as_str() {
            "boolean" => Family::Boolean,
            "subspace" => Family::Subspace {
                q: raw.q.ok_or_else(|| serde::de::Error::custom("subspace requires q"))?,
            },
            "rpower" => Family::RPower {
                r: raw.r.ok_or_else(|| serde::de::Error::custom("rpower requires r"))?,
            },
            other => return Err(serde::de::Error::custom(format!("unknown family {other}"))),
        };
        Ok(FamilySpec { family, n: raw.n })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Boolean => write!(f, "boolean(n={})", self.n),
            Family::Subspace { q } => write!(f, "subspace(q={q},n={})", self.n),
            Family::RPower { r } => write!(f, "rpower(r={r},n={})", self.n),
        }
    }
}

/// Reduced-row-echelon matrix over GF(q); the unique canonical form of a
/// subspace, so equality of codes is equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RrefMatrix {
    pub cols: u64,
    pub rows: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ElementCode {
    /// Subset of `[n]` as a bitmask; bit `j` is membership of `j+1`.
    Bits(u64),
    /// Vector in `{0,..,r}^n`.
    Digits(Vec<u8>),
    /// Subspace of `F_q^n` in reduced row echelon form.
    Rref(RrefMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// First argument strictly below the second.
    Below,
    Above,
    Incomparable,
}

/// Family-aware element operations; holds the field tables for subspaces.
#[derive(Debug, Clone)]
pub struct FamilyOps {
    pub spec: FamilySpec,
    gf: Option<GfTable>,
}

impl FamilyOps {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        spec.validate()?;
        let gf = match spec.family {
            Family::Subspace { q } => Some(GfTable::new(q)?),
            _ => None,
        };
        Ok(FamilyOps { spec, gf })
    }

    pub fn gf(&self) -> Option<&GfTable> {
        self.gf.as_ref()
    }

    pub fn rank(&self, x: &ElementCode) -> u64 {
        match x {
            ElementCode::Bits(m) => m.count_ones() as u64,
            ElementCode::Digits(d) => d.iter().map(|&v| v as u64).sum(),
            ElementCode::Rref(m) => m.rows.len() as u64,
        }
    }

    /// Number of coordinates equal to two; only meaningful for r = 2.
    pub fn twos(&self, x: &ElementCode) -> u64 {
        match x {
            ElementCode::Digits(d) => d.iter().filter(|&&v| v == 2).count() as u64,
            _ => 0,
        }
    }

    pub fn bottom(&self) -> ElementCode {
        match self.spec.family {
            Family::Boolean => ElementCode::Bits(0),
            Family::RPower { .. } => ElementCode::Digits(vec![0; self.spec.n as usize]),
            Family::Subspace { .. } => ElementCode::Rref(RrefMatrix {
                cols: self.spec.n,
                rows: Vec::new(),
            }),
        }
    }

    pub fn relation(&self, x: &ElementCode, y: &ElementCode) -> Result<Relation> {
        match (x, y) {
            (ElementCode::Bits(a), ElementCode::Bits(b)) => Ok(if a == b {
                Relation::Equal
            } else if a & !b == 0 {
                Relation::Below
            } else if b & !a == 0 {
                Relation::Above
            } else {
                Relation::Incomparable
            }),
            (ElementCode::Digits(a), ElementCode::Digits(b)) => {
                if a.len() != b.len() {
                    return Err(Error::FamilyMismatch);
                }
                let le = a.iter().zip(b).all(|(u, v)| u <= v);
                let ge = a.iter().zip(b).all(|(u, v)| u >= v);
                Ok(match (le, ge) {
                    (true, true) => Relation::Equal,
                    (true, false) => Relation::Below,
                    (false, true) => Relation::Above,
                    (false, false) => Relation::Incomparable,
                })
            }
            (ElementCode::Rref(a), ElementCode::Rref(b)) => {
                let gf = self.gf.as_ref().ok_or(Error::FamilyMismatch)?;
                if a.cols != b.cols {
                    return Err(Error::FamilyMismatch);
                }
                match a.rows.len().cmp(&b.rows.len()) {
                    Ordering::Equal => Ok(if a == b {
                        Relation::Equal
                    } else {
                        Relation::Incomparable
                    }),
                    Ordering::Less => Ok(if contains(gf, b, a) {
                        Relation::Below
                    } else {
                        Relation::Incomparable
                    }),
                    Ordering::Greater => Ok(if contains(gf, a, b) {
                        Relation::Above
                    } else {
                        Relation::Incomparable
                    }),
                }
            }
            _ => Err(Error::FamilyMismatch),
        }
    }

    /// The rank-complement automorphism (an anti-automorphism for
    /// subspaces: orthogonal complement reverses containment).
    pub fn complement(&self, x: &ElementCode) -> ElementCode {
        match x {
            ElementCode::Bits(m) => {
                let full = if self.spec.n == 64 { !0 } else { (1u64 << self.spec.n) - 1 };
                ElementCode::Bits(full & !m)
            }
            ElementCode::Digits(d) => {
                let r = match self.spec.family {
                    Family::RPower { r } => r as u8,
                    _ => unreachable!(),
                };
                ElementCode::Digits(d.iter().map(|&v| r - v).collect())
            }
            ElementCode::Rref(m) => {
                let gf = self.gf.as_ref().expect("subspace ops carry field tables");
                ElementCode::Rref(kernel(gf, m))
            }
        }
    }

    /// Canonical digit sequence used for the total order and the string
    /// encoding.
    fn digits(&self, x: &ElementCode) -> Vec<u8> {
        match x {
            ElementCode::Bits(m) => {
                (0..self.spec.n).map(|j| ((m >> j) & 1) as u8).collect()
            }
            ElementCode::Digits(d) => d.clone(),
            ElementCode::Rref(m) => m.rows.iter().flatten().copied().collect(),
        }
    }

    /// The fixed total order: rank first, then lexicographic on the
    /// encoded payload.
    pub fn cmp_codes(&self, x: &ElementCode, y: &ElementCode) -> Ordering {
        self.rank(x)
            .cmp(&self.rank(y))
            .then_with(|| self.digits(x).cmp(&self.digits(y)))
    }

    pub fn encode(&self, x: &ElementCode) -> String {
        match x {
            ElementCode::Rref(m) => {
                if m.rows.is_empty() {
                    "-".to_string()
                } else {
                    m.rows
                        .iter()
                        .map(|row| row.iter().map(|e| digit_char(*e)).collect::<String>())
                        .collect::<Vec<_>>()
                        .join(";")
                }
            }
            _ => self.digits(x).iter().map(|&d| digit_char(d)).collect(),
        }
    }

    pub fn decode(&self, s: &str) -> Result<ElementCode> {
        let bad = || Error::InvalidSpec(format!("cannot decode element {s:?}"));
        match self.spec.family {
            Family::Boolean => {
                if s.len() as u64 != self.spec.n {
                    return Err(bad());
                }
                let mut mask = 0u64;
                for (j, c) in s.chars().enumerate() {
                    match c {
                        '1' => mask |= 1 << j,
                        '0' => {}
                        _ => return Err(bad()),
                    }
                }
                Ok(ElementCode::Bits(mask))
            }
            Family::RPower { r } => {
                if s.len() as u64 != self.spec.n {
                    return Err(bad());
                }
                let digits: Vec<u8> = s
                    .chars()
                    .map(|c| digit_val(c).ok_or_else(bad))
                    .collect::<Result<_>>()?;
                if digits.iter().any(|&d| d as u64 > r) {
                    return Err(bad());
                }
                Ok(ElementCode::Digits(digits))
            }
            Family::Subspace { q } => {
                if s == "-" {
                    return Ok(self.bottom());
                }
                let mut rows = Vec::new();
                for part in s.split(';') {
                    if part.len() as u64 != self.spec.n {
                        return Err(bad());
                    }
                    let row: Vec<u8> = part
                        .chars()
                        .map(|c| digit_val(c).ok_or_else(bad))
                        .collect::<Result<_>>()?;
                    if row.iter().any(|&e| e as u64 >= q) {
                        return Err(bad());
                    }
                    rows.push(row);
                }
                let gf = self.gf.as_ref().unwrap();
                let m = rref(gf, self.spec.n, rows);
                Ok(ElementCode::Rref(m))
            }
        }
    }

    /// All elements of level `i`, in canonical order.
    pub fn enumerate_level(&self, i: u64) -> Result<Vec<ElementCode>> {
        let mut out: Vec<ElementCode> = match self.spec.family {
            Family::Boolean => {
                let mut v = Vec::new();
                for mask in 0..(1u64 << self.spec.n) {
                    if mask.count_ones() as u64 == i {
                        v.push(ElementCode::Bits(mask));
                    }
                }
                v
            }
            Family::RPower { r } => {
                let n = self.spec.n as usize;
                let mut v = Vec::new();
                let mut digits = vec![0u8; n];
                'outer: loop {
                    if digits.iter().map(|&d| d as u64).sum::<u64>() == i {
                        v.push(ElementCode::Digits(digits.clone()));
                    }
                    // odometer, last coordinate fastest
                    let mut pos = n;
                    loop {
                        if pos == 0 {
                            break 'outer;
                        }
                        pos -= 1;
                        if (digits[pos] as u64) < r {
                            digits[pos] += 1;
                            continue 'outer;
                        }
                        digits[pos] = 0;
                    }
                }
                v
            }
            Family::Subspace { .. } => {
                let gf = self.gf.as_ref().unwrap();
                enumerate_rref(gf, self.spec.n, i)
            }
        };
        out.sort_by(|a, b| self.cmp_codes(a, b));
        Ok(out)
    }

    /// Upper covers of `x`, in canonical order.
    pub fn covers_above(&self, x: &ElementCode) -> Vec<ElementCode> {
        let mut out = match x {
            ElementCode::Bits(m) => (0..self.spec.n)
                .filter(|j| m >> j & 1 == 0)
                .map(|j| ElementCode::Bits(m | (1 << j)))
                .collect::<Vec<_>>(),
            ElementCode::Digits(d) => {
                let r = match self.spec.family {
                    Family::RPower { r } => r as u8,
                    _ => unreachable!(),
                };
                let mut v = Vec::new();
                for (c, &val) in d.iter().enumerate() {
                    if val < r {
                        let mut up = d.clone();
                        up[c] += 1;
                        v.push(ElementCode::Digits(up));
                    }
                }
                v
            }
            ElementCode::Rref(m) => {
                let gf = self.gf.as_ref().unwrap();
                let q = gf.q;
                let n = self.spec.n;
                let mut seen = std::collections::HashSet::new();
                let mut v = Vec::new();
                let mut vec_buf = vec![0u8; n as usize];
                let total = (q as u128).pow(n as u32);
                for code in 1..total {
                    let mut c = code;
                    for slot in vec_buf.iter_mut() {
                        *slot = (c % q as u128) as u8;
                        c /= q as u128;
                    }
                    if in_rowspace(gf, m, &vec_buf) {
                        continue;
                    }
                    let mut rows = m.rows.clone();
                    rows.push(vec_buf.clone());
                    let up = rref(gf, n, rows);
                    if seen.insert(up.clone()) {
                        v.push(ElementCode::Rref(up));
                    }
                }
                v
            }
        };
        out.sort_by(|a, b| self.cmp_codes(a, b));
        out
    }
}

fn digit_char(d: u8) -> char {
    char::from_digit(d as u32, 16).expect("field elements stay below 16")
}

fn digit_val(c: char) -> Option<u8> {
    c.to_digit(16).map(|v| v as u8)
}

/// Reduce `v` against the RREF rows of `m`; true iff `v` lies in the
/// row space.
fn in_rowspace(gf: &GfTable, m: &RrefMatrix, v: &[u8]) -> bool {
    let mut v = v.to_vec();
    for row in &m.rows {
        let pivot = row.iter().position(|&e| e != 0).expect("RREF rows are nonzero");
        let c = v[pivot];
        if c != 0 {
            for (slot, &r) in v.iter_mut().zip(row) {
                *slot = gf.sub(*slot, gf.mul(c, r));
            }
        }
    }
    v.iter().all(|&e| e == 0)
}

/// Every row of `inner` lies in the row space of `outer`.
fn contains(gf: &GfTable, outer: &RrefMatrix, inner: &RrefMatrix) -> bool {
    inner.rows.iter().all(|row| in_rowspace(gf, outer, row))
}

/// Canonical reduced row echelon form of arbitrary generating rows.
pub fn rref(gf: &GfTable, cols: u64, rows: Vec<Vec<u8>>) -> RrefMatrix {
    let mut work = rows;
    let mut out: Vec<Vec<u8>> = Vec::new();
    for col in 0..cols as usize {
        // eliminate against established pivots first
        let mut pivot_row = None;
        for (idx, row) in work.iter().enumerate() {
            if row[col] != 0 && row[..col].iter().all(|&e| e == 0) {
                pivot_row = Some(idx);
                break;
            }
        }
        let Some(idx) = pivot_row else { continue };
        let mut piv = work.swap_remove(idx);
        let inv = gf.inv(piv[col]);
        for e in piv.iter_mut() {
            *e = gf.mul(*e, inv);
        }
        for row in work.iter_mut().chain(out.iter_mut()) {
            let c = row[col];
            if c != 0 {
                for (slot, &p) in row.iter_mut().zip(&piv) {
                    *slot = gf.sub(*slot, gf.mul(c, p));
                }
            }
        }
        out.push(piv);
    }
    out.sort_by_key(|row| row.iter().position(|&e| e != 0));
    RrefMatrix { cols, rows: out }
}

/// Kernel of the RREF matrix as a canonical RREF matrix (the orthogonal
/// complement under the standard bilinear form).
fn kernel(gf: &GfTable, m: &RrefMatrix) -> RrefMatrix {
    let n = m.cols as usize;
    let pivots: Vec<usize> = m
        .rows
        .iter()
        .map(|row| row.iter().position(|&e| e != 0).unwrap())
        .collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; n];
        v[free] = 1;
        for (row, &p) in m.rows.iter().zip(&pivots) {
            v[p] = gf.neg(row[free]);
        }
        basis.push(v);
    }
    rref(gf, m.cols, basis)
}

/// All RREF matrices with `dim` rows over GF(q) with `n` columns.
fn enumerate_rref(gf: &GfTable, n: u64, dim: u64) -> Vec<ElementCode> {
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..dim as usize).collect();
    if dim > n {
        return out;
    }
    loop {
        emit_for_pivots(gf, n as usize, &pivots, &mut out);
        // next combination of pivot columns in lex order
        let k = pivots.len();
        if k == 0 {
            break;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n as usize - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
    out
}

fn emit_for_pivots(gf: &GfTable, n: usize, pivots: &[usize], out: &mut Vec<ElementCode>) {
    let dim = pivots.len();
    // free entries: row j, non-pivot column c > pivots[j]
    let mut free_pos = Vec::new();
    for (j, &p) in pivots.iter().enumerate() {
        for c in p + 1..n {
            if !pivots.contains(&c) {
                free_pos.push((j, c));
            }
        }
    }
    let q = gf.q;
    let mut assignment = vec![0u8; free_pos.len()];
    loop {
        let mut rows = vec![vec![0u8; n]; dim];
        for (j, &p) in pivots.iter().enumerate() {
            rows[j][p] = 1;
        }
        for (&(j, c), &v) in free_pos.iter().zip(&assignment) {
            rows[j][c] = v;
        }
        out.push(ElementCode::Rref(RrefMatrix { cols: n as u64, rows }));
        // odometer over assignments
        let mut pos = assignment.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if (assignment[pos] as u64) < q - 1 {
                assignment[pos] += 1;
                break;
            }
            assignment[pos] = 0;
        }
    }
}

/// A fully materialized poset: elements in canonical order, level offsets,
/// and the strict-above closure as bitsets.
#[derive(Debug, Clone)]
pub struct RankedPoset {
    pub ops: FamilyOps,
    pub elements: Vec<ElementCode>,
    pub ranks: Vec<u64>,
    level_start: Vec<usize>,
    above: Vec<BitSet>,
}

impl RankedPoset {
    pub fn build(spec: FamilySpec, limits: &Limits) -> Result<Self> {
        let ops = FamilyOps::new(spec)?;
        let size = spec.ground_size()?;
        let max = BigUint::from(limits.max_closure_elements as u64);
        if size > max {
            return Err(Error::ResourceLimit(format!(
                "{spec} has {size} elements, above the materialization limit {}",
                limits.max_closure_elements
            )));
        }
        let size = size.to_usize().expect("bounded by limit");
        let mut elements = Vec::with_capacity(size);
        let mut level_start = Vec::with_capacity(spec.top_rank() as usize + 2);
        for i in 0..=spec.top_rank() {
            level_start.push(elements.len());
            elements.extend(ops.enumerate_level(i)?);
        }
        level_start.push(elements.len());
        debug_assert_eq!(elements.len(), size);
        let ranks: Vec<u64> = elements.iter().map(|e| ops.rank(e)).collect();

        let mut above = vec![BitSet::new(size); size];
        for lo in 0..size {
            for hi in lo + 1..size {
                if ranks[hi] <= ranks[lo] {
                    continue;
                }
                if ops.relation(&elements[lo], &elements[hi])? == Relation::Below {
                    above[lo].set(hi);
                }
            }
        }
        Ok(RankedPoset { ops, elements, ranks, level_start, above })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn spec(&self) -> FamilySpec {
        self.ops.spec
    }

    pub fn top_rank(&self) -> u64 {
        self.ops.spec.top_rank()
    }

    pub fn rank_of(&self, idx: usize) -> u64 {
        self.ranks[idx]
    }

    /// Index range of level `i` in the canonical element order.
    pub fn level_range(&self, i: u64) -> std::ops::Range<usize> {
        self.level_start[i as usize]..self.level_start[i as usize + 1]
    }

    pub fn level_len(&self, i: u64) -> usize {
        self.level_range(i).len()
    }

    /// Strictly-above closure of element `idx`.
    pub fn above(&self, idx: usize) -> &BitSet {
        &self.above[idx]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.above[a].get(b) || self.above[b].get(a)
    }

    /// Unordered comparable pairs within the whole poset.
    pub fn total_comparable_pairs(&self) -> u64 {
        self.above.iter().map(|s| s.count() as u64).sum()
    }

    /// Number of comparable partners of `idx` inside `set`.
    pub fn degree_in(&self, idx: usize, set: &BitSet) -> usize {
        let mut d = self.above[idx].intersection_count(set);
        for lo in set.iter_ones() {
            if self.above[lo].get(idx) {
                d += 1;
            }
        }
        d
    }

    pub fn index_of(&self, code: &ElementCode) -> Option<usize> {
        self.elements
            .binary_search_by(|e| self.ops.cmp_codes(e, code))
            .ok()
    }

    /// Comparability adjacency (strict, both directions) as index lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for lo in 0..self.len() {
            for hi in self.above[lo].iter_ones() {
                adj[lo].push(hi);
                adj[hi].push(lo);
            }
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn poset(spec: FamilySpec) -> RankedPoset {
        RankedPoset::build(spec, &Limits::default()).unwrap()
    }

    #[test]
    fn boolean_n2_profile() {
        let p = poset(FamilySpec::boolean(2));
        assert_eq!(p.len(), 4);
        let sizes: Vec<usize> = (0..=2).map(|i| p.level_len(i)).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        assert_eq!(p.total_comparable_pairs(), 5);
    }

    #[test]
    fn rpower_n2_profile() {
        let p = poset(FamilySpec::rpower(2, 2));
        assert_eq!(p.len(), 9);
        let sizes: Vec<usize> = (0..=4).map(|i| p.level_len(i)).collect();
        assert_eq!(sizes, vec![1, 2, 3, 2, 1]);
    }

    #[test]
    fn subspace_q2_n3_profile() {
        let p = poset(FamilySpec::subspace(2, 3));
        assert_eq!(p.len(), 16);
        let sizes: Vec<usize> = (0..=3).map(|i| p.level_len(i)).collect();
        assert_eq!(sizes, vec![1, 7, 7, 1]);
    }

    #[test]
    fn level_sizes_match_enumeration() {
        for spec in [
            FamilySpec::boolean(5),
            FamilySpec::rpower(2, 3),
            FamilySpec::rpower(3, 2),
            FamilySpec::subspace(2, 4),
            FamilySpec::subspace(3, 3),
            FamilySpec::subspace(4, 2),
        ] {
            let ops = FamilyOps::new(spec).unwrap();
            for i in 0..=spec.top_rank() {
                let listed = ops.enumerate_level(i).unwrap().len();
                assert_eq!(
                    BigUint::from(listed as u64),
                    spec.level_size(i).unwrap(),
                    "{spec} level {i}"
                );
            }
        }
    }

    #[test]
    fn level_size_symmetry_and_total() {
        for spec in [
            FamilySpec::boolean(9),
            FamilySpec::rpower(2, 6),
            FamilySpec::rpower(4, 3),
            FamilySpec::subspace(2, 5),
            FamilySpec::subspace(9, 3),
        ] {
            let top = spec.top_rank();
            let mut total = BigUint::zero();
            for i in 0..=top {
                assert_eq!(
                    spec.level_size(i).unwrap(),
                    spec.level_size(top - i).unwrap()
                );
                total += spec.level_size(i).unwrap();
            }
            assert_eq!(total, spec.ground_size().unwrap());
        }
    }

    #[test]
    fn comparability_examples() {
        let ops = FamilyOps::new(FamilySpec::boolean(2)).unwrap();
        let x = ops.decode("10").unwrap(); // {1}
        let y = ops.decode("11").unwrap(); // {1,2}
        assert_eq!(ops.relation(&x, &y).unwrap(), Relation::Below);

        let ops = FamilyOps::new(FamilySpec::rpower(2, 2)).unwrap();
        let a = ops.decode("10").unwrap();
        let b = ops.decode("01").unwrap();
        assert_eq!(ops.relation(&a, &b).unwrap(), Relation::Incomparable);

        let ops = FamilyOps::new(FamilySpec::subspace(2, 3)).unwrap();
        let line = ops.decode("100").unwrap();
        let plane = ops.decode("100;010").unwrap();
        assert_eq!(ops.relation(&line, &plane).unwrap(), Relation::Below);
        assert_eq!(ops.relation(&plane, &line).unwrap(), Relation::Above);
    }

    #[test]
    fn strict_partial_order_exhaustive() {
        // transitive and irreflexive on every materialized poset up to 100
        for spec in [
            FamilySpec::boolean(4),
            FamilySpec::rpower(2, 2),
            FamilySpec::rpower(3, 2),
            FamilySpec::subspace(2, 3),
            FamilySpec::subspace(3, 2),
        ] {
            let p = poset(spec);
            assert!(p.len() <= 100);
            for a in 0..p.len() {
                assert!(!p.above(a).get(a));
                for b in p.above(a).iter_ones() {
                    assert!(!p.above(b).get(a), "antisymmetry");
                    for c in p.above(b).iter_ones() {
                        assert!(p.above(a).get(c), "transitivity");
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_order_sorted_and_searchable() {
        for spec in [
            FamilySpec::boolean(4),
            FamilySpec::rpower(2, 3),
            FamilySpec::subspace(2, 3),
        ] {
            let p = poset(spec);
            for w in p.elements.windows(2) {
                assert_eq!(p.ops.cmp_codes(&w[0], &w[1]), Ordering::Less);
            }
            for (i, e) in p.elements.iter().enumerate() {
                assert_eq!(p.index_of(e), Some(i));
            }
        }
    }

    #[test]
    fn encode_decode_round_trip() {
        for spec in [
            FamilySpec::boolean(3),
            FamilySpec::rpower(2, 3),
            FamilySpec::subspace(2, 3),
            FamilySpec::subspace(3, 2),
        ] {
            let p = poset(spec);
            for e in &p.elements {
                let s = p.ops.encode(e);
                assert_eq!(&p.ops.decode(&s).unwrap(), e, "{spec} {s}");
            }
        }
    }

    #[test]
    fn complement_is_rank_reversing_involution() {
        for spec in [
            FamilySpec::boolean(4),
            FamilySpec::rpower(2, 2),
            FamilySpec::rpower(3, 2),
            FamilySpec::subspace(2, 3),
            FamilySpec::subspace(3, 2),
        ] {
            let p = poset(spec);
            let top = p.top_rank();
            for e in &p.elements {
                let c = p.ops.complement(e);
                assert_eq!(p.ops.rank(&c), top - p.ops.rank(e));
                assert_eq!(p.ops.complement(&c), *e);
                assert!(p.index_of(&c).is_some());
            }
        }
    }

    #[test]
    fn covers_step_one_level() {
        for spec in [
            FamilySpec::boolean(3),
            FamilySpec::rpower(2, 2),
            FamilySpec::subspace(2, 3),
            FamilySpec::subspace(3, 2),
        ] {
            let p = poset(spec);
            for (idx, e) in p.elements.iter().enumerate() {
                let ups = p.ops.covers_above(e);
                // cover count matches the closure restricted to the next level
                let next: Vec<usize> = p
                    .above(idx)
                    .iter_ones()
                    .filter(|&j| p.rank_of(j) == p.rank_of(idx) + 1)
                    .collect();
                assert_eq!(ups.len(), next.len());
                for u in &ups {
                    assert_eq!(p.ops.rank(u), p.rank_of(idx) + 1);
                    assert_eq!(p.ops.relation(e, u).unwrap(), Relation::Below);
                }
            }
        }
    }

    #[test]
    fn ranked_poset_cover_axiom() {
        // if x < y with a rank gap, some z one level up sits strictly between
        for spec in [FamilySpec::rpower(2, 2), FamilySpec::subspace(2, 3)] {
            let p = poset(spec);
            for a in 0..p.len() {
                for b in p.above(a).iter_ones() {
                    if p.rank_of(b) > p.rank_of(a) + 1 {
                        let found = p.above(a).iter_ones().any(|z| {
                            p.rank_of(z) == p.rank_of(a) + 1 && p.above(z).get(b)
                        });
                        assert!(found);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(FamilySpec::subspace(6, 3).validate().is_err());
        assert!(FamilySpec::rpower(0, 3).validate().is_err());
        assert!(RankedPoset::build(FamilySpec::boolean(40), &Limits::default()).is_err());
    }

    #[test]
    fn family_spec_json_round_trip() {
        for spec in [
            FamilySpec::boolean(4),
            FamilySpec::rpower(2, 7),
            FamilySpec::subspace(4, 3),
        ] {
            let js = serde_json::to_string(&spec).unwrap();
            let back: FamilySpec = serde_json::from_str(&js).unwrap();
            assert_eq!(back, spec);
        }
        let js = r#"{"family":"rpower","n":2,"r":2}"#;
        let spec: FamilySpec = serde_json::from_str(js).unwrap();
        assert_eq!(spec, FamilySpec::rpower(2, 2));
    }
}
