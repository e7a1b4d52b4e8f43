//! Definitional brute-force oracles, written without the library's search,
//! canonical labeling or recursion code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use hombasis::{Signature, Structure};

pub fn digraph(n: usize, edges: &[(usize, usize)]) -> Structure {
    Structure::digraph(n, edges).unwrap()
}

pub fn isolated(n: usize) -> Structure {
    digraph(n, &[])
}

/// Calls `f` on every map `a -> b`, as a vector of images.
pub fn for_each_map(na: usize, nb: usize, mut f: impl FnMut(&[usize])) {
    let mut h = vec![0usize; na];
    loop {
        f(&h);
        let mut i = 0;
        loop {
            if i == na {
                return;
            }
            h[i] += 1;
            if h[i] < nb {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

fn image(tuple: &[usize], h: &[usize]) -> Vec<usize> {
    tuple.iter().map(|&x| h[x]).collect()
}

pub fn is_hom(a: &Structure, b: &Structure, h: &[usize]) -> bool {
    a.relations().iter().zip(b.relations()).all(|(ra, rb)| ra.iter().all(|t| rb.contains(&image(t, h))))
}

fn is_onto(h: &[usize], nb: usize) -> bool {
    let hit: BTreeSet<usize> = h.iter().copied().collect();
    hit.len() == nb
}

fn is_relation_onto(a: &Structure, b: &Structure, h: &[usize]) -> bool {
    a.relations().iter().zip(b.relations()).all(|(ra, rb)| {
        let images: BTreeSet<Vec<usize>> = ra.iter().map(|t| image(t, h)).collect();
        images == *rb
    })
}

/// `(hom, surjhom, condens)` by enumerating all `|B|^|A|` maps.
pub fn naive_counts(a: &Structure, b: &Structure) -> (u64, u64, u64) {
    let (mut hom, mut surj, mut cond) = (0, 0, 0);
    for_each_map(a.len(), b.len(), |h| {
        if is_hom(a, b, h) {
            hom += 1;
            if is_onto(h, b.len()) {
                surj += 1;
                if is_relation_onto(a, b, h) {
                    cond += 1;
                }
            }
        }
    });
    (hom, surj, cond)
}

pub fn naive_hom(a: &Structure, b: &Structure) -> u64 {
    naive_counts(a, b).0
}

/// Components under "occur in a common tuple", by flood fill.
pub fn naive_components(s: &Structure) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut adjacent = vec![BTreeSet::new(); n];
    for t in s.relations().iter().flatten() {
        for &x in t {
            adjacent[x].extend(t.iter().copied());
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut part = Vec::new();
        while let Some(x) = stack.pop() {
            part.push(x);
            for &y in &adjacent[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        part.sort();
        out.push(part);
    }
    out
}

/// `hom(a, b)` as the product of naive counts over the components of `a`,
/// for sources too large to enumerate whole.
pub fn naive_hom_big(a: &Structure, b: &Structure) -> BigUint {
    naive_components(a)
        .iter()
        .map(|part| naive_hom(&induced_on(a, part), b))
        .fold(BigUint::one(), |acc, c| acc * c)
}

pub fn naive_surjhom(a: &Structure, b: &Structure) -> u64 {
    naive_counts(a, b).1
}

pub fn naive_condens(a: &Structure, b: &Structure) -> u64 {
    naive_counts(a, b).2
}

/// Tries every bijection.
pub fn naive_isomorphic(a: &Structure, b: &Structure) -> bool {
    if a.signature() != b.signature() || a.len() != b.len() || a.tuple_count() != b.tuple_count() {
        return false;
    }
    let n = a.len();
    let mut found = false;
    for_each_map(n, n, |h| {
        if !found && is_onto(h, n) && is_hom(a, b, h) {
            found = true;
        }
    });
    found
}

/// The substructure of `s` induced on the elements selected by `mask`.
pub fn induced_by_mask(s: &Structure, mask: u32) -> Structure {
    let keep: Vec<usize> = (0..s.len()).filter(|&i| mask >> i & 1 == 1).collect();
    induced_on(s, &keep)
}

fn induced_on(s: &Structure, keep: &[usize]) -> Structure {
    let mut index = vec![usize::MAX; s.len()];
    for (new, &old) in keep.iter().enumerate() {
        index[old] = new;
    }
    let relations = s
        .relations()
        .iter()
        .map(|r| {
            r.iter()
                .filter(|t| t.iter().all(|&x| index[x] != usize::MAX))
                .map(|t| t.iter().map(|&x| index[x]).collect())
                .collect()
        })
        .collect();
    Structure::from_indices(s.signature().clone(), keep.len(), relations).unwrap()
}

/// Every deduct of `s`, one per subset of its tuples.
pub fn all_deducts(s: &Structure) -> Vec<Structure> {
    let tuples: Vec<(usize, Vec<usize>)> =
        s.relations().iter().enumerate().flat_map(|(r, ts)| ts.iter().map(move |t| (r, t.clone()))).collect();
    (0u64..1 << tuples.len())
        .map(|mask| {
            let mut relations = vec![Vec::new(); s.relations().len()];
            for (i, (r, t)) in tuples.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    relations[*r].push(t.clone());
                }
            }
            Structure::from_indices(s.signature().clone(), s.len(), relations).unwrap()
        })
        .collect()
}

pub fn naive_indsub(pattern: &Structure, host: &Structure) -> u64 {
    (1u32..1 << host.len()).filter(|&m| naive_isomorphic(&induced_by_mask(host, m), pattern)).count() as u64
}

pub fn naive_deducts(pattern: &Structure, host: &Structure) -> u64 {
    all_deducts(host).iter().filter(|d| naive_isomorphic(d, pattern)).count() as u64
}

/// Every structure over `sig` on exactly `n` elements `0..n`.
pub fn all_labeled(sig: &Signature, n: usize) -> Vec<Structure> {
    let mut slots: Vec<(usize, Vec<usize>)> = Vec::new();
    for (r, arity) in sig.arities().enumerate() {
        let mut t = vec![0usize; arity];
        for_each_map(arity, n, |h| {
            t.copy_from_slice(h);
            slots.push((r, t.clone()));
        });
    }
    (0u64..1 << slots.len())
        .map(|mask| {
            let mut relations = vec![Vec::new(); sig.len()];
            for (i, (r, t)) in slots.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    relations[*r].push(t.clone());
                }
            }
            Structure::from_indices(sig.clone(), n, relations).unwrap()
        })
        .collect()
}

/// One representative per isomorphism class among all labeled structures
/// with `1..=max` elements, by pairwise naive isomorphism tests.
pub fn naive_classes(sig: &Signature, max: usize) -> Vec<Structure> {
    let mut reps: Vec<Structure> = Vec::new();
    for n in 1..=max {
        for s in all_labeled(sig, n) {
            if !reps.iter().any(|r| naive_isomorphic(r, &s)) {
                reps.push(s);
            }
        }
    }
    reps
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Number of surjections from an `m`-set onto an `n`-set.
pub fn surjection_number(m: u64, n: u64) -> BigUint {
    let mut total = BigInt::zero();
    for k in 0..=n {
        let term = BigInt::from(binomial(n, k)) * BigInt::from(n - k).pow(m as u32);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total.to_biguint().unwrap()
}

/// Fraction-free Bareiss determinant.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
