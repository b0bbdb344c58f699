//! Finite relations over `{0, .., d-1}`.
//!
//! Tuples are packed as base-`d` integers with the first coordinate most
//! significant, so numeric order of the packed codes is lexicographic order of
//! the tuples. Relations whose full space `d^arity` has at most 2^16 points also
//! carry a membership bitmask.

use std::fmt;

use crate::error::{Error, Result};

/// Largest tuple space for which a membership bitmask is kept.
const BITMASK_LIMIT: u64 = 1 << 16;

#[derive(Clone)]
pub struct Relation {
    arity: usize,
    domain_size: u8,
    codes: Vec<u64>,
    // rows decoded once, row-major
    flat: Vec<u8>,
    bitmask: Option<Vec<u64>>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.domain_size == other.domain_size && self.codes == other.codes
    }
}

impl Eq for Relation {}

impl std::hash::Hash for Relation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.domain_size.hash(state);
        self.codes.hash(state);
    }
}

impl PartialOrd for Relation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Relation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.domain_size, self.arity, &self.codes).cmp(&(other.domain_size, other.arity, &other.codes))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(d={}, arity={}, rows=[", self.domain_size, self.arity)?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            for v in row {
                write!(f, "{v}")?;
            }
        }
        write!(f, "])")
    }
}

/// Size of the tuple space `d^arity`, if it fits in a `u64`.
pub fn space_size(domain_size: u8, arity: usize) -> Option<u64> {
    (domain_size as u64).checked_pow(u32::try_from(arity).ok()?)
}

pub fn encode(domain_size: u8, tuple: &[u8]) -> u64 {
    tuple.iter().fold(0u64, |acc, &v| acc * domain_size as u64 + v as u64)
}

pub fn decode_into(domain_size: u8, mut code: u64, out: &mut [u8]) {
    let d = domain_size as u64;
    for slot in out.iter_mut().rev() {
        *slot = (code % d) as u8;
        code /= d;
    }
}

pub fn decode(domain_size: u8, arity: usize, code: u64) -> Vec<u8> {
    let mut out = vec![0; arity];
    decode_into(domain_size, code, &mut out);
    out
}

impl Relation {
    /// Builds a relation from its tuples. Duplicates are merged.
    pub fn new<I, T>(domain_size: u8, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u8]>,
    {
        if domain_size == 0 {
            return Err(Error::InvalidRelation("domain must be non-empty".into()));
        }
        if arity == 0 {
            return Err(Error::InvalidRelation("relations must have positive arity".into()));
        }
        if space_size(domain_size, arity).is_none() {
            return Err(Error::InvalidRelation(format!(
                "tuple space {domain_size}^{arity} does not fit in 64 bits"
            )));
        }
        let mut codes = Vec::new();
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(Error::InvalidRelation(format!(
                    "tuple of length {} in relation of arity {arity}",
                    t.len()
                )));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= domain_size) {
                return Err(Error::InvalidRelation(format!(
                    "entry {bad} outside domain of size {domain_size}"
                )));
            }
            codes.push(encode(domain_size, t));
        }
        Self::from_codes(domain_size, arity, codes)
    }

    /// Builds a relation from packed codes (see [`encode`]).
    pub fn from_codes(domain_size: u8, arity: usize, mut codes: Vec<u64>) -> Result<Self> {
        let space = space_size(domain_size, arity)
            .ok_or_else(|| Error::InvalidRelation("tuple space too large".into()))?;
        if arity == 0 {
            return Err(Error::InvalidRelation("relations must have positive arity".into()));
        }
        codes.sort_unstable();
        codes.dedup();
        if codes.is_empty() {
            return Err(Error::InvalidRelation("relations must be non-empty".into()));
        }
        if *codes.last().unwrap() >= space {
            return Err(Error::InvalidRelation("code outside tuple space".into()));
        }
        let mut flat = vec![0u8; codes.len() * arity];
        for (row, &c) in flat.chunks_mut(arity).zip(&codes) {
            decode_into(domain_size, c, row);
        }
        let bitmask = (space <= BITMASK_LIMIT).then(|| {
            let mut bits = vec![0u64; space.div_ceil(64) as usize];
            for &c in &codes {
                bits[(c / 64) as usize] |= 1 << (c % 64);
            }
            bits
        });
        Ok(Relation { arity, domain_size, codes, flat, bitmask })
    }

    /// Parses rows written as digit strings, e.g. `["100", "010", "001"]`.
    pub fn from_rows(domain_size: u8, rows: &[&str]) -> Result<Self> {
        let arity = rows
            .first()
            .map(|r| r.chars().filter(|c| !c.is_whitespace()).count())
            .ok_or_else(|| Error::InvalidRelation("no rows".into()))?;
        let mut tuples = Vec::with_capacity(rows.len());
        for row in rows {
            let mut t = Vec::with_capacity(arity);
            for c in row.chars().filter(|c| !c.is_whitespace()) {
                let v = c
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidRelation(format!("non-digit `{c}` in row `{row}`")))?;
                t.push(v as u8);
            }
            tuples.push(t);
        }
        Self::new(domain_size, arity, tuples)
    }

    /// `A^arity`.
    pub fn full(domain_size: u8, arity: usize) -> Result<Self> {
        let space = space_size(domain_size, arity)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidRelation("full relation too large".into()))?;
        Self::from_codes(domain_size, arity, (0..space).collect())
    }

    /// The binary equality relation `=_A`.
    pub fn equality(domain_size: u8) -> Self {
        Self::new(domain_size, 2, (0..domain_size).map(|a| [a, a])).expect("equality is well formed")
    }

    /// The unary singleton `{(a)}`.
    pub fn singleton(domain_size: u8, a: u8) -> Result<Self> {
        Self::new(domain_size, 1, [[a]])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> u8 {
        self.domain_size
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    /// Always false: relations are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    /// Row `i` in lexicographic order.
    pub fn row(&self, i: usize) -> &[u8] {
        &self.flat[i * self.arity..(i + 1) * self.arity]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.flat.chunks(self.arity)
    }

    pub fn contains_code(&self, code: u64) -> bool {
        match &self.bitmask {
            Some(bits) => bits.get((code / 64) as usize).is_some_and(|w| w >> (code % 64) & 1 == 1),
            None => self.codes.binary_search(&code).is_ok(),
        }
    }

    pub fn contains(&self, tuple: &[u8]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&v| v < self.domain_size)
            && self.contains_code(encode(self.domain_size, tuple))
    }

    /// Column `j` as a vector indexed by row.
    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Projection onto the given coordinates, in the given order.
    pub fn project(&self, coords: &[usize]) -> Result<Self> {
        if let Some(&c) = coords.iter().find(|&&c| c >= self.arity) {
            return Err(Error::InvalidRelation(format!("coordinate {c} out of range")));
        }
        let tuples: Vec<Vec<u8>> = self.rows().map(|r| coords.iter().map(|&c| r[c]).collect()).collect();
        Self::new(self.domain_size, coords.len(), tuples)
    }

    /// Image of the relation under a coordinatewise map of domain values.
    pub fn map_values(&self, target_domain: u8, f: impl Fn(u8) -> u8) -> Result<Self> {
        let tuples: Vec<Vec<u8>> = self.rows().map(|r| r.iter().map(|&v| f(v)).collect()).collect();
        Self::new(target_domain, self.arity, tuples)
    }

    /// `A^arity \ self`, or `None` when the relation is full.
    pub fn complement(&self) -> Result<Option<Self>> {
        let space = space_size(self.domain_size, self.arity)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InfeasibleArity("complement of a very wide relation".into()))?;
        let codes: Vec<u64> = (0..space).filter(|&c| !self.contains_code(c)).collect();
        if codes.is_empty() {
            return Ok(None);
        }
        Self::from_codes(self.domain_size, self.arity, codes).map(Some)
    }

    pub fn is_full(&self) -> bool {
        space_size(self.domain_size, self.arity).is_some_and(|s| s == self.codes.len() as u64)
    }

    pub fn union(&self, other: &Relation) -> Result<Self> {
        if self.domain_size != other.domain_size {
            return Err(Error::DomainMismatch { left: self.domain_size, right: other.domain_size });
        }
        if self.arity != other.arity {
            return Err(Error::InvalidRelation("union of relations with different arities".into()));
        }
        let codes = self.codes.iter().chain(&other.codes).copied().collect();
        Self::from_codes(self.domain_size, self.arity, codes)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.domain_size == other.domain_size
            && self.arity == other.arity
            && self.codes.iter().all(|&c| other.contains_code(c))
    }

    /// Digit-string rows, one per line. Requires `domain_size <= 10`.
    pub fn to_matrix_string(&self) -> String {
        let mut s = String::new();
        for row in self.rows() {
            for &v in row {
                s.push(char::from_digit(v as u32, 36).unwrap_or('?'));
            }
            s.push('\n');
        }
        s
    }
}

/// Relations that show up throughout the crate.
pub mod named {
    use super::Relation;

    /// Positive 1-in-3: exactly one coordinate is 1.
    pub fn one_in_three() -> Relation {
        Relation::from_rows(2, &["100", "010", "001"]).unwrap()
    }

    /// Not-all-equal on three Boolean coordinates.
    pub fn nae3() -> Relation {
        Relation::from_rows(2, &["001", "010", "011", "100", "101", "110"]).unwrap()
    }

    pub fn or2() -> Relation {
        Relation::from_rows(2, &["01", "10", "11"]).unwrap()
    }

    /// `x -> y`.
    pub fn implication() -> Relation {
        Relation::from_rows(2, &["00", "01", "11"]).unwrap()
    }

    /// `x xor y = 1`.
    pub fn xor2() -> Relation {
        Relation::from_rows(2, &["01", "10"]).unwrap()
    }

    /// `x xor y = 0`.
    pub fn xnor2() -> Relation {
        Relation::from_rows(2, &["00", "11"]).unwrap()
    }

    /// `x xor y xor z = 1`.
    pub fn xor3() -> Relation {
        Relation::from_rows(2, &["001", "010", "100", "111"]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_dedup() {
        let r = Relation::new(2, 2, [[1, 1], [0, 1], [1, 1]]).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.row(0), &[0, 1]);
        assert_eq!(r.row(1), &[1, 1]);
        let s = Relation::from_rows(2, &["11", "01"]).unwrap();
        assert_eq!(r, s);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Relation::new(2, 2, Vec::<Vec<u8>>::new()).is_err());
        assert!(Relation::new(2, 0, [Vec::<u8>::new()]).is_err());
        assert!(Relation::new(2, 2, [[0, 2]]).is_err());
        assert!(Relation::new(2, 2, [vec![0u8]]).is_err());
    }

    #[test]
    fn membership_with_and_without_bitmask() {
        let r = named::one_in_three();
        assert!(r.contains(&[0, 1, 0]));
        assert!(!r.contains(&[1, 1, 0]));
        // 2^40 space: no bitmask, binary search path
        let wide = Relation::new(2, 40, [vec![1u8; 40]]).unwrap();
        assert!(wide.contains(&[1; 40]));
        assert!(!wide.contains(&[0; 40]));
    }

    #[test]
    fn projection_and_complement() {
        let r = named::one_in_three();
        let p = r.project(&[0, 1]).unwrap();
        assert_eq!(p, Relation::from_rows(2, &["00", "01", "10"]).unwrap());
        let c = named::or2().complement().unwrap().unwrap();
        assert_eq!(c, Relation::from_rows(2, &["00"]).unwrap());
        assert!(Relation::full(2, 2).unwrap().complement().unwrap().is_none());
    }

    #[test]
    fn ternary_domain_codes() {
        let r = Relation::new(3, 2, [[2, 1], [0, 2]]).unwrap();
        assert_eq!(r.codes(), &[2, 7]);
        assert_eq!(decode(3, 2, 7), vec![2, 1]);
    }
}
