//! Exact counters for homomorphisms, surjective homomorphisms and
//! condensations.
//!
//! All three share one depth-first search. Elements of the source are
//! assigned in a fixed order and a partial map is abandoned as soon as some
//! fully assigned source tuple lands outside the target relation. Surjective
//! searches also abandon a branch once the unassigned elements can no longer
//! cover the targets not yet hit; condensations check relation coverage at
//! the leaves. Homomorphism counts factor over connected components.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::canon::ClassCount;
use crate::error::Result;
use crate::structure::Structure;
use crate::Count;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Hom,
    Surjective,
    Condensation,
}

struct Search<'a> {
    target: &'a Structure,
    order: Vec<usize>,
    /// Source tuples that become fully assigned at each depth.
    checks: Vec<Vec<(usize, &'a [usize])>>,
    members: Vec<HashSet<Vec<usize>>>,
    source_tuples: Vec<Vec<&'a [usize]>>,
    mode: Mode,
    stop_at_first: bool,
}

struct State {
    assignment: Vec<usize>,
    cover: Vec<usize>,
    uncovered: usize,
    buffer: Vec<usize>,
    leaves: u128,
}

/// Greedy order: repeatedly take the unassigned element sharing the most
/// tuples with already ordered elements, smallest index on ties.
fn assignment_order(source: &Structure) -> Vec<usize> {
    let n = source.len();
    let mut weight = vec![vec![0usize; n]; n];
    for tuple in source.relations().iter().flatten() {
        for &x in tuple {
            for &y in tuple {
                if x != y {
                    weight[x][y] += 1;
                }
            }
        }
    }
    let mut placed = vec![false; n];
    let mut score = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .max_by(|&x, &y| score[x].cmp(&score[y]).then(y.cmp(&x)))
            .unwrap();
        placed[next] = true;
        order.push(next);
        for y in 0..n {
            score[y] += weight[next][y];
        }
    }
    order
}

impl<'a> Search<'a> {
    fn new(source: &'a Structure, target: &'a Structure, mode: Mode, stop_at_first: bool) -> Self {
        let order = assignment_order(source);
        let mut rank = vec![0; source.len()];
        for (depth, &x) in order.iter().enumerate() {
            rank[x] = depth;
        }
        let mut checks = vec![Vec::new(); source.len()];
        for (r, tuples) in source.relations().iter().enumerate() {
            for t in tuples {
                let depth = t.iter().map(|&e| rank[e]).max().unwrap();
                checks[depth].push((r, t.as_slice()));
            }
        }
        let members = target.relations().iter().map(|ts| ts.iter().cloned().collect()).collect();
        let source_tuples =
            source.relations().iter().map(|ts| ts.iter().map(Vec::as_slice).collect()).collect();
        Self { target, order, checks, members, source_tuples, mode, stop_at_first }
    }

    fn run(&self) -> u128 {
        let mut state = State {
            assignment: vec![usize::MAX; self.order.len()],
            cover: vec![0; self.target.len()],
            uncovered: self.target.len(),
            buffer: Vec::new(),
            leaves: 0,
        };
        self.descend(0, &mut state);
        state.leaves
    }

    /// Returns true when the search should stop.
    fn descend(&self, depth: usize, state: &mut State) -> bool {
        let remaining = self.order.len() - depth;
        if self.mode != Mode::Hom && state.uncovered > remaining {
            return false;
        }
        if depth == self.order.len() {
            if self.mode == Mode::Condensation && !self.covers_relations(state) {
                return false;
            }
            state.leaves += 1;
            return self.stop_at_first;
        }
        let x = self.order[depth];
        for y in 0..self.target.len() {
            state.assignment[x] = y;
            if !self.consistent(depth, state) {
                continue;
            }
            state.cover[y] += 1;
            if state.cover[y] == 1 {
                state.uncovered -= 1;
            }
            let stop = self.descend(depth + 1, state);
            state.cover[y] -= 1;
            if state.cover[y] == 0 {
                state.uncovered += 1;
            }
            if stop {
                return true;
            }
        }
        state.assignment[x] = usize::MAX;
        false
    }

    fn consistent(&self, depth: usize, state: &mut State) -> bool {
        for &(r, tuple) in &self.checks[depth] {
            state.buffer.clear();
            state.buffer.extend(tuple.iter().map(|&e| state.assignment[e]));
            if !self.members[r].contains(state.buffer.as_slice()) {
                return false;
            }
        }
        true
    }

    fn covers_relations(&self, state: &State) -> bool {
        self.source_tuples.iter().zip(&self.members).all(|(tuples, target)| {
            let images: HashSet<Vec<usize>> = tuples
                .iter()
                .map(|t| t.iter().map(|&e| state.assignment[e]).collect())
                .collect();
            images.len() == target.len()
        })
    }
}

fn search_count(a: &Structure, b: &Structure, mode: Mode) -> Count {
    BigUint::from(Search::new(a, b, mode, false).run())
}

type Shape = (usize, Vec<std::collections::BTreeSet<Vec<usize>>>);

/// Number of homomorphisms from `a` to `b`.
pub fn count_hom(a: &Structure, b: &Structure) -> Result<Count> {
    a.check_same_signature(b)?;
    // Identical components (up to element names) are counted once.
    let mut shapes: HashMap<Shape, u32> = HashMap::new();
    let mut order = Vec::new();
    for component in a.components() {
        let part = a.induced(&component);
        let shape = (part.len(), part.relations().to_vec());
        let entry = shapes.entry(shape.clone()).or_insert(0);
        if *entry == 0 {
            order.push((shape, part));
        }
        *entry += 1;
    }
    let mut total = BigUint::one();
    for (shape, part) in order {
        let c = search_count(&part, b, Mode::Hom);
        if c.is_zero() {
            return Ok(c);
        }
        total *= num_traits::pow(c, shapes[&shape] as usize);
    }
    Ok(total)
}

/// Number of homomorphisms from `a` onto the universe of `b`.
pub fn count_surjhom(a: &Structure, b: &Structure) -> Result<Count> {
    a.check_same_signature(b)?;
    if a.len() < b.len() {
        return Ok(Count::zero());
    }
    Ok(search_count(a, b, Mode::Surjective))
}

/// Number of surjective homomorphisms from `a` to `b` that also map every
/// relation of `a` onto the corresponding relation of `b`.
pub fn count_condens(a: &Structure, b: &Structure) -> Result<Count> {
    a.check_same_signature(b)?;
    if a.len() < b.len() || a.relations().iter().zip(b.relations()).any(|(x, y)| x.len() < y.len()) {
        return Ok(Count::zero());
    }
    Ok(search_count(a, b, Mode::Condensation))
}

/// Surjective homomorphism count by inclusion–exclusion over the induced
/// substructures of `b`.
pub fn count_surjhom_inclusion_exclusion(a: &Structure, b: &Structure) -> Result<Count> {
    a.check_same_signature(b)?;
    let mut total = BigInt::zero();
    for sub in b.induced_substructures() {
        let term = BigInt::from(count_hom(a, &sub)?);
        if (b.len() - sub.len()) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total.to_biguint().expect("inclusion-exclusion over a boolean lattice is non-negative"))
}

pub fn exists_hom(a: &Structure, b: &Structure) -> Result<bool> {
    a.check_same_signature(b)?;
    Ok(a.components().iter().all(|c| {
        let part = a.induced(c);
        Search::new(&part, b, Mode::Hom, true).run() > 0
    }))
}

/// Homomorphisms exist in both directions.
pub fn hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    Ok(exists_hom(a, b)? && exists_hom(b, a)?)
}

/// `Σ_{B'} Surjhom(a, B') · Indsub(B', b)` over the induced classes of `b`,
/// including `b` itself.
pub fn hom_via_surjections(a: &Structure, b: &Structure) -> Result<Count> {
    let mut total = count_surjhom(a, b)?;
    for ClassCount { representative, count, .. } in crate::canon::proper_induced_classes(b) {
        total += count_surjhom(a, &representative)? * count;
    }
    Ok(total)
}

/// `Σ_{B'} Condens(a, B') · Deducts(B', b)` over the deduct classes of `b`,
/// including `b` itself.
pub fn surjhom_via_condensations(a: &Structure, b: &Structure) -> Result<Count> {
    let mut total = count_condens(a, b)?;
    for ClassCount { representative, count, .. } in crate::canon::proper_deduct_classes(b) {
        total += count_condens(a, &representative)? * count;
    }
    Ok(total)
}
