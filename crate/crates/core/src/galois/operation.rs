use std::fmt;

use crate::error::{Error, Result};
use crate::relation::{decode, encode, space_size, Relation};

/// A total operation `A^n -> A`, tabulated in lexicographic argument order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operation {
    arity: usize,
    domain_size: u8,
    table: Vec<u8>,
}

impl fmt::Debug for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operation(arity={}, d={}, {})", self.arity, self.domain_size, self.table_string())
    }
}

impl Operation {
    pub fn new(arity: usize, domain_size: u8, table: Vec<u8>) -> Result<Self> {
        let size = table_len(arity, domain_size)?;
        if table.len() != size {
            return Err(Error::InvalidOperation(format!("table has {} entries, expected {size}", table.len())));
        }
        if table.iter().any(|&v| v >= domain_size) {
            return Err(Error::InvalidOperation("table value outside the domain".into()));
        }
        Ok(Operation { arity, domain_size, table })
    }

    pub fn from_fn(arity: usize, domain_size: u8, f: impl Fn(&[u8]) -> u8) -> Result<Self> {
        let size = table_len(arity, domain_size)?;
        let table = (0..size as u64).map(|c| f(&decode(domain_size, arity, c))).collect();
        Self::new(arity, domain_size, table)
    }

    /// Parses a digit string such as `"0001"` for binary conjunction.
    pub fn from_table_str(arity: usize, domain_size: u8, s: &str) -> Result<Self> {
        let table = s
            .chars()
            .map(|c| c.to_digit(10).map(|v| v as u8).ok_or_else(|| Error::InvalidOperation(format!("bad digit `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arity, domain_size, table)
    }

    /// The `i`-th projection of arity `n` (0-based).
    pub fn projection(arity: usize, domain_size: u8, i: usize) -> Self {
        assert!(i < arity);
        Self::from_fn(arity, domain_size, |x| x[i]).expect("projection")
    }

    pub fn constant(arity: usize, domain_size: u8, value: u8) -> Self {
        Self::from_fn(arity, domain_size, |_| value).expect("constant")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> u8 {
        self.domain_size
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn apply(&self, args: &[u8]) -> u8 {
        self.table[encode(self.domain_size, args) as usize]
    }

    pub fn table_string(&self) -> String {
        self.table.iter().map(|&v| char::from_digit(v as u32, 36).unwrap_or('?')).collect()
    }

    pub fn is_projection(&self) -> bool {
        (0..self.arity).any(|i| *self == Self::projection(self.arity, self.domain_size, i))
    }

    /// Unary operations only: whether the map is a permutation of the domain.
    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.domain_size as usize];
        self.arity == 1 && self.table.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true))
    }

    /// `self(inner_1, .., inner_m)`, all inner operations of a common arity.
    pub fn compose(&self, inner: &[&Operation]) -> Result<Operation> {
        if inner.len() != self.arity {
            return Err(Error::InvalidOperation("composition needs one inner operation per argument".into()));
        }
        let n = inner.first().map_or(0, |g| g.arity);
        if inner.iter().any(|g| g.arity != n || g.domain_size != self.domain_size) {
            return Err(Error::InvalidOperation("inner operations must share arity and domain".into()));
        }
        let size = table_len(n, self.domain_size)?;
        let d = self.domain_size as usize;
        let table = (0..size)
            .map(|c| {
                let code = inner.iter().fold(0usize, |acc, g| acc * d + g.table[c] as usize);
                self.table[code]
            })
            .collect();
        Ok(Operation { arity: n, domain_size: self.domain_size, table })
    }
}

pub(crate) fn table_len(arity: usize, domain_size: u8) -> Result<usize> {
    if arity == 0 || domain_size == 0 {
        return Err(Error::InvalidOperation("operations need positive arity and domain".into()));
    }
    space_size(domain_size, arity)
        .filter(|&s| s <= 1 << 26)
        .map(|s| s as usize)
        .ok_or(Error::ArityTooLarge { arity, cap: 26 })
}

/// An operation defined on a subset of `A^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialOperation {
    arity: usize,
    domain_size: u8,
    table: Vec<Option<u8>>,
}

impl PartialOperation {
    pub fn new(arity: usize, domain_size: u8, table: Vec<Option<u8>>) -> Result<Self> {
        let size = table_len(arity, domain_size)?;
        if table.len() != size {
            return Err(Error::InvalidOperation(format!("table has {} entries, expected {size}", table.len())));
        }
        if table.iter().flatten().any(|&v| v >= domain_size) {
            return Err(Error::InvalidOperation("table value outside the domain".into()));
        }
        if table.iter().all(Option::is_none) {
            return Err(Error::InvalidOperation("partial operations need a defined point".into()));
        }
        Ok(PartialOperation { arity, domain_size, table })
    }

    /// Restriction of a total operation to the given argument tuples.
    pub fn restrict(f: &Operation, domain: &[Vec<u8>]) -> Result<Self> {
        let mut table = vec![None; f.table.len()];
        for args in domain {
            if args.len() != f.arity || args.iter().any(|&v| v >= f.domain_size) {
                return Err(Error::InvalidOperation("argument tuple outside A^n".into()));
            }
            let c = encode(f.domain_size, args) as usize;
            table[c] = Some(f.table[c]);
        }
        Self::new(f.arity, f.domain_size, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> u8 {
        self.domain_size
    }

    pub fn table(&self) -> &[Option<u8>] {
        &self.table
    }

    pub fn apply(&self, args: &[u8]) -> Option<u8> {
        self.table[encode(self.domain_size, args) as usize]
    }
}

impl From<&Operation> for PartialOperation {
    fn from(f: &Operation) -> Self {
        PartialOperation { arity: f.arity, domain_size: f.domain_size, table: f.table.iter().map(|&v| Some(v)).collect() }
    }
}

/// Columnwise application of a (possibly partial) operation to every n-tuple
/// of rows of `r`. Stops early when `visit` returns false.
fn for_each_image(
    arity: usize,
    domain_size: u8,
    lookup: impl Fn(usize) -> Option<u8>,
    r: &Relation,
    mut visit: impl FnMut(&[u8]) -> bool,
) {
    let k = r.arity();
    let rows = r.len();
    let d = domain_size as usize;
    let mut idx = vec![0usize; arity];
    let mut image = vec![0u8; k];
    'tuples: loop {
        let mut defined = true;
        for (j, slot) in image.iter_mut().enumerate() {
            let code = idx.iter().fold(0usize, |acc, &i| acc * d + r.row(i)[j] as usize);
            match lookup(code) {
                Some(v) => *slot = v,
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined && !visit(&image) {
            return;
        }
        for pos in (0..arity).rev() {
            idx[pos] += 1;
            if idx[pos] < rows {
                continue 'tuples;
            }
            idx[pos] = 0;
        }
        return;
    }
}

/// Whether `f` is a polymorphism of `r`.
pub fn preserves(f: &Operation, r: &Relation) -> Result<bool> {
    if f.domain_size != r.domain_size() {
        return Err(Error::DomainMismatch { left: f.domain_size, right: r.domain_size() });
    }
    let mut ok = true;
    for_each_image(f.arity, f.domain_size, |c| Some(f.table[c]), r, |img| {
        ok = r.contains(img);
        ok
    });
    Ok(ok)
}

/// Whether `f` is a partial polymorphism of `r`: row tuples whose columns
/// leave the domain of `f` impose nothing.
pub fn preserves_partial(f: &PartialOperation, r: &Relation) -> Result<bool> {
    if f.domain_size != r.domain_size() {
        return Err(Error::DomainMismatch { left: f.domain_size, right: r.domain_size() });
    }
    let mut ok = true;
    for_each_image(f.arity, f.domain_size, |c| f.table[c], r, |img| {
        ok = r.contains(img);
        ok
    });
    Ok(ok)
}

pub fn preserves_all<'a>(f: &Operation, relations: impl IntoIterator<Item = &'a Relation>) -> Result<bool> {
    for r in relations {
        if !preserves(f, r)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The seven Boolean probe operations.
pub mod boolean {
    use super::Operation;

    pub fn not() -> Operation {
        Operation::new(1, 2, vec![1, 0]).unwrap()
    }

    pub fn c0() -> Operation {
        Operation::new(1, 2, vec![0, 0]).unwrap()
    }

    pub fn c1() -> Operation {
        Operation::new(1, 2, vec![1, 1]).unwrap()
    }

    pub fn and() -> Operation {
        Operation::new(2, 2, vec![0, 0, 0, 1]).unwrap()
    }

    pub fn or() -> Operation {
        Operation::new(2, 2, vec![0, 1, 1, 1]).unwrap()
    }

    /// `(x & y) | (y & z) | (x & z)`.
    pub fn maj() -> Operation {
        Operation::from_fn(3, 2, |a| (a[0] & a[1]) | (a[1] & a[2]) | (a[0] & a[2])).unwrap()
    }

    /// `x ^ y ^ z`.
    pub fn minority() -> Operation {
        Operation::from_fn(3, 2, |a| a[0] ^ a[1] ^ a[2]).unwrap()
    }
}
