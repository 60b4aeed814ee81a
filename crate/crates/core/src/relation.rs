//! Permitted-tuple sets and the circulant symmetric base relation.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{RbError, Result};

/// Upper bound on `d^arity` for a materialised relation (one bit per cell).
pub const MAX_RELATION_CELLS: u64 = 1 << 26;

/// A set of `arity`-tuples over `[0, d)`.
///
/// Stored as a bitset over the lexicographic (big-endian mixed radix) index of
/// each tuple, so iteration yields tuples in sorted order and equality is
/// canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    d: u32,
    bits: Vec<u64>,
    len: usize,
}

fn cell_count(arity: usize, d: u32) -> Result<usize> {
    let cells = u32::try_from(arity)
        .ok()
        .and_then(|a| u64::from(d).checked_pow(a))
        .filter(|&c| c <= MAX_RELATION_CELLS)
        .ok_or_else(|| {
            RbError::InvalidRelation(format!(
                "d^k = {d}^{arity} exceeds {MAX_RELATION_CELLS} cells"
            ))
        })?;
    Ok(cells as usize)
}

impl Relation {
    pub fn empty(arity: usize, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(RbError::InvalidRelation("domain size 0".into()));
        }
        let cells = cell_count(arity, d)?;
        Ok(Relation {
            arity,
            d,
            bits: vec![0; cells.div_ceil(64)],
            len: 0,
        })
    }

    pub fn from_tuples<I, T>(arity: usize, d: u32, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[u32]>,
    {
        let mut rel = Relation::empty(arity, d)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(RbError::InvalidRelation(format!(
                    "tuple {t:?} has arity {} (expected {arity})",
                    t.len()
                )));
            }
            if let Some(&v) = t.iter().find(|&&v| v >= d) {
                return Err(RbError::InvalidRelation(format!(
                    "value {v} outside [0, {d})"
                )));
            }
            rel.insert_index(rel.index_of(t));
        }
        Ok(rel)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn cells(&self) -> usize {
        (self.d as usize).pow(self.arity as u32)
    }

    /// Lexicographic index of a tuple; values must already be in range.
    pub fn index_of(&self, tuple: &[u32]) -> usize {
        debug_assert_eq!(tuple.len(), self.arity);
        tuple
            .iter()
            .fold(0usize, |acc, &v| acc * self.d as usize + v as usize)
    }

    pub fn tuple_at(&self, mut index: usize) -> Vec<u32> {
        let d = self.d as usize;
        let mut t = vec![0u32; self.arity];
        for slot in t.iter_mut().rev() {
            *slot = (index % d) as u32;
            index /= d;
        }
        t
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn contains(&self, tuple: &[u32]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&v| v < self.d)
            && self.contains_index(self.index_of(tuple))
    }

    fn insert_index(&mut self, index: usize) {
        let word = &mut self.bits[index / 64];
        let mask = 1u64 << (index % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
        }
    }

    /// Allowed tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        self.indices().map(move |i| self.tuple_at(i))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * 64 + bit)
            })
        })
    }

    /// Every tuple over `[0, d)^arity` not in `self`.
    pub fn complement(&self) -> Relation {
        let cells = self.cells();
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        let tail = cells % 64;
        if tail != 0 {
            if let Some(last) = bits.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Relation {
            arity: self.arity,
            d: self.d,
            bits,
            len: cells - self.len,
        }
    }

    /// How many allowed tuples carry each value at `coord`.
    pub fn value_degrees(&self, coord: usize) -> Vec<usize> {
        assert!(coord < self.arity, "coordinate {coord} out of range");
        let mut degrees = vec![0usize; self.d as usize];
        for t in self.tuples() {
            degrees[t[coord] as usize] += 1;
        }
        degrees
    }

    /// The common per-value degree if every value at every coordinate occurs
    /// equally often.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.arity == 0 {
            return None;
        }
        let first = self.value_degrees(0)[0];
        (0..self.arity)
            .all(|c| self.value_degrees(c).iter().all(|&deg| deg == first))
            .then_some(first)
    }

    /// Checks `|allowed| = b d^(k-1)` and that every value of every
    /// coordinate occurs in exactly `b d^(k-2)` tuples.
    pub fn check_regular(&self, b: u32) -> Result<()> {
        if self.arity < 2 {
            return Err(RbError::InvalidRelation(
                "regularity needs arity >= 2".into(),
            ));
        }
        let d = self.d as usize;
        let per_value = b as usize * d.pow(self.arity as u32 - 2);
        if self.len != per_value * d {
            return Err(RbError::InvalidRelation(format!(
                "{} tuples, expected b d^(k-1) = {}",
                self.len,
                per_value * d
            )));
        }
        match self.regular_degree() {
            Some(deg) if deg == per_value => Ok(()),
            _ => Err(RbError::InvalidRelation(format!(
                "not regular with per-value degree {per_value}"
            ))),
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("arity", &self.arity)
            .field("d", &self.d)
            .field("tuples", &self.tuples().collect::<Vec<_>>())
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct RelationRepr {
    arity: usize,
    d: u32,
    tuples: Vec<Vec<u32>>,
}

impl Serialize for Relation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RelationRepr {
            arity: self.arity,
            d: self.d,
            tuples: self.tuples().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = RelationRepr::deserialize(deserializer)?;
        Relation::from_tuples(repr.arity, repr.d, &repr.tuples).map_err(serde::de::Error::custom)
    }
}

/// Rejects anything that is not a bijection on `[0, d)`.
pub fn check_permutation(perm: &[u32], d: u32) -> Result<()> {
    let not_perm = |reason: String| Err(RbError::NotAPermutation { d, reason });
    if perm.len() != d as usize {
        return not_perm(format!("length {}", perm.len()));
    }
    let mut seen = vec![false; d as usize];
    for &v in perm {
        if v >= d {
            return not_perm(format!("image {v} out of range"));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return not_perm(format!("image {v} repeated"));
        }
    }
    Ok(())
}

pub fn invert_permutation(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (i, &v) in perm.iter().enumerate() {
        inv[v as usize] = i as u32;
    }
    inv
}

/// The circulant symmetric relation: `t` is allowed iff
/// `(t_1 + ... + t_{k-1} - t_0) mod d < b`.
pub fn gen_base_relation(d: u32, k: usize, b: u32) -> Result<Relation> {
    if k < 2 {
        return Err(RbError::InvalidRelation(format!(
            "arity must be >= 2, got {k}"
        )));
    }
    if b == 0 || b >= d {
        return Err(RbError::InvalidRelation(format!(
            "b = {b} must lie in [1, d - 1] for d = {d}"
        )));
    }
    let mut rel = Relation::empty(k, d)?;
    let dd = u64::from(d);
    for index in 0..rel.cells() {
        let t = rel.tuple_at(index);
        let tail: u64 = t[1..].iter().map(|&v| u64::from(v)).sum();
        if (tail + dd * k as u64 - u64::from(t[0])) % dd < u64::from(b) {
            rel.insert_index(index);
        }
    }
    Ok(rel)
}

/// Replaces `t[coord]` by `perm[t[coord]]` in every tuple.
pub fn apply_permutation(relation: &Relation, coord: usize, perm: &[u32]) -> Result<Relation> {
    if coord >= relation.arity() {
        return Err(RbError::InvalidRelation(format!(
            "coordinate {coord} out of range for arity {}",
            relation.arity()
        )));
    }
    check_permutation(perm, relation.d())?;
    let mut out = Relation::empty(relation.arity(), relation.d())?;
    for mut t in relation.tuples() {
        t[coord] = perm[t[coord] as usize];
        out.insert_index(out.index_of(&t));
    }
    Ok(out)
}
