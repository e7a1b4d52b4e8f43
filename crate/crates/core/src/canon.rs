//! Brute-force canonical labeling and everything built on it.
//!
//! The canonical key of a structure is the lexicographically least encoding
//! over all `n!` relabelings of its universe onto `0..n`. An encoding lists
//! `n`, then for each symbol in name order the tuple count followed by the
//! sorted relabeled tuples. Two structures over the same signature get equal
//! keys iff they are isomorphic. Intended for universes of up to about seven
//! elements.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use itertools::Itertools;

use crate::error::Result;
use crate::structure::{Signature, Structure};

/// Totally ordered witness of an isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Sort key realising the `(total size, canonical key)` order.
pub type OrderKey = (usize, CanonicalKey);

pub fn order_key(s: &Structure) -> OrderKey {
    (s.total_size(), canonical_key(s))
}

/// Packs a tuple into one integer, most significant digit first, so that
/// numeric order on codes is lexicographic order on tuples.
fn tuple_code(tuple: &[usize], perm: &[usize], base: u128) -> u128 {
    tuple.iter().fold(0u128, |acc, &e| acc * base + perm[e] as u128)
}

fn encode_into(s: &Structure, perm: &[usize], buf: &mut Vec<u128>) {
    let base = s.len() as u128;
    buf.clear();
    buf.push(base);
    for tuples in s.relations() {
        buf.push(tuples.len() as u128);
        let start = buf.len();
        buf.extend(tuples.iter().map(|t| tuple_code(t, perm, base)));
        buf[start..].sort_unstable();
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical key together with a minimising relabeling (`perm[old] = new`).
pub fn canonical_labeling(s: &Structure) -> (CanonicalKey, Vec<usize>) {
    let n = s.len();
    assert!(n <= u8::MAX as usize, "canonical labeling supports at most 255 elements");
    for arity in s.signature().arities() {
        assert!(
            (n as u128).checked_pow(arity as u32).is_some(),
            "tuple codes overflow for arity {arity} on {n} elements"
        );
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best_perm = perm.clone();
    let mut best = Vec::new();
    encode_into(s, &perm, &mut best);
    let mut candidate = Vec::with_capacity(best.len());
    while next_permutation(&mut perm) {
        encode_into(s, &perm, &mut candidate);
        if candidate < best {
            std::mem::swap(&mut candidate, &mut best);
            best_perm.copy_from_slice(&perm);
        }
    }
    (serialize(s, &best), best_perm)
}

fn serialize(s: &Structure, encoding: &[u128]) -> CanonicalKey {
    let n = s.len() as u128;
    let mut bytes = Vec::new();
    let mut push = |v: u128| bytes.extend_from_slice(&(v as u32).to_be_bytes());
    push(encoding[0]);
    let mut pos = 1;
    for arity in s.signature().arities() {
        let count = encoding[pos] as usize;
        push(count as u128);
        pos += 1;
        for &code in &encoding[pos..pos + count] {
            let mut digits = vec![0u128; arity];
            let mut c = code;
            for d in digits.iter_mut().rev() {
                *d = c % n.max(1);
                c /= n.max(1);
            }
            digits.into_iter().for_each(&mut push);
        }
        pos += count;
    }
    CanonicalKey(bytes)
}

pub fn canonical_key(s: &Structure) -> CanonicalKey {
    canonical_labeling(s).0
}

/// The representative of `s`'s class: `s` relabeled by its minimising
/// permutation, elements named `"0"`, …, `"n-1"`.
pub fn canonical_form(s: &Structure) -> Structure {
    let (_, perm) = canonical_labeling(s);
    let names = (0..s.len()).map(|i| i.to_string()).collect();
    Structure::from_parts(s.signature().clone(), names, s.mapped_relations(&perm))
}

pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    a.check_same_signature(b)?;
    if a.len() != b.len() || a.relations().iter().map(BTreeSet::len).ne(b.relations().iter().map(BTreeSet::len)) {
        return Ok(false);
    }
    Ok(canonical_key(a) == canonical_key(b))
}

/// Number of element subsets of `host` inducing a copy of `pattern`.
pub fn indsub_count(pattern: &Structure, host: &Structure) -> Result<u64> {
    pattern.check_same_signature(host)?;
    if pattern.len() > host.len() {
        return Ok(0);
    }
    let key = canonical_key(pattern);
    let tuples = pattern.tuple_count();
    Ok((0..host.len())
        .combinations(pattern.len())
        .map(|subset| host.induced(&subset))
        .filter(|sub| sub.tuple_count() == tuples && canonical_key(sub) == key)
        .count() as u64)
}

/// Number of deducts of `host` isomorphic to `pattern`.
pub fn deducts_count(pattern: &Structure, host: &Structure) -> Result<u64> {
    pattern.check_same_signature(host)?;
    if pattern.len() != host.len()
        || pattern.relations().iter().zip(host.relations()).any(|(p, h)| p.len() > h.len())
    {
        return Ok(0);
    }
    if host.signature().is_empty() {
        // bare sets of equal size
        return Ok(1);
    }
    let key = canonical_key(pattern);
    let choices = pattern
        .relations()
        .iter()
        .zip(host.relations())
        .map(|(p, h)| h.iter().cloned().combinations(p.len()).collect::<Vec<_>>());
    let mut count = 0;
    for pick in choices.multi_cartesian_product() {
        let relations = pick.into_iter().map(|ts| ts.into_iter().collect()).collect();
        let d = Structure::from_parts(host.signature().clone(), host.universe().to_vec(), relations);
        if canonical_key(&d) == key {
            count += 1;
        }
    }
    Ok(count)
}

/// One isomorphism class occurring inside a host structure.
#[derive(Clone, Debug)]
pub struct ClassCount {
    pub key: CanonicalKey,
    /// First occurrence in enumeration order, carrying the host's names.
    pub representative: Structure,
    pub count: u64,
}

fn group_by_class(items: impl Iterator<Item = Structure>) -> Vec<ClassCount> {
    let mut classes: BTreeMap<OrderKey, ClassCount> = BTreeMap::new();
    for s in items {
        let key = canonical_key(&s);
        classes
            .entry((s.total_size(), key.clone()))
            .and_modify(|c| c.count += 1)
            .or_insert(ClassCount { key, representative: s, count: 1 });
    }
    classes.into_values().collect()
}

/// Classes of the proper nonempty induced substructures of `s` with their
/// `Indsub` multiplicities, in `(total size, key)` order.
pub fn proper_induced_classes(s: &Structure) -> Vec<ClassCount> {
    let n = s.len();
    group_by_class(s.induced_substructures().filter(move |sub| sub.len() < n))
}

/// Classes of the proper deducts of `s` with their `Deducts` multiplicities.
pub fn proper_deduct_classes(s: &Structure) -> Vec<ClassCount> {
    let t = s.tuple_count();
    group_by_class(s.deducts().filter(move |d| d.tuple_count() < t))
}

/// Lazy enumeration of class representatives in `(total size, key)` order.
pub struct StructureClasses {
    signature: Signature,
    max_universe: usize,
    level: usize,
    max_level: usize,
    pending: VecDeque<Structure>,
}

impl StructureClasses {
    pub fn new(signature: Signature, max_universe: usize) -> Self {
        let max_level = max_universe
            + signature
                .arities()
                .map(|a| max_universe.saturating_pow(a as u32))
                .fold(0usize, usize::saturating_add);
        Self { signature, max_universe, level: 0, max_level, pending: VecDeque::new() }
    }

    fn fill_level(&mut self, total: usize) {
        let mut found: BTreeMap<CanonicalKey, Structure> = BTreeMap::new();
        for n in 1..=self.max_universe.min(total) {
            let tuples = total - n;
            let atoms: Vec<(usize, Vec<usize>)> = self
                .signature
                .arities()
                .enumerate()
                .flat_map(|(r, arity)| {
                    (0..arity).map(|_| 0..n).multi_cartesian_product().map(move |t| (r, t))
                })
                .collect();
            if tuples > atoms.len() {
                continue;
            }
            let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
            for pick in atoms.iter().combinations(tuples) {
                let mut relations = vec![BTreeSet::new(); self.signature.len()];
                for (r, t) in pick {
                    relations[*r].insert(t.clone());
                }
                let s = Structure::from_parts(self.signature.clone(), names.clone(), relations);
                let (key, perm) = canonical_labeling(&s);
                found.entry(key).or_insert_with(|| {
                    Structure::from_parts(s.signature().clone(), names.clone(), s.mapped_relations(&perm))
                });
            }
        }
        self.pending.extend(found.into_values());
    }
}

impl Iterator for StructureClasses {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        while self.pending.is_empty() && self.level < self.max_level {
            self.level += 1;
            let level = self.level;
            self.fill_level(level);
        }
        self.pending.pop_front()
    }
}

/// One canonical representative per class with `1 <= |universe| <= max_universe`.
pub fn enumerate_structures(signature: &Signature, max_universe: usize) -> Vec<Structure> {
    StructureClasses::new(signature.clone(), max_universe).collect()
}
