//! Recovering individual hom values from an oracle for a linear combination.
//!
//! Given `f = Σ β_i · hom(·, B_i)` as a black box, the terms are peeled one
//! homomorphic-equivalence class at a time. For a class `B_1, …, B_m` that
//! maps into no other remaining class, a distinguisher `D` makes the values
//! `hom(D, B_i)` nonzero and pairwise distinct, and the oracle answers on
//! `B_1 + a + k·D` (`k < m`) form a Vandermonde system in the unknowns
//! `β_i · hom(B_1, B_i) · hom(a, B_i)`. Terms resolved earlier are
//! subtracted from the answers using the values already recovered.

use std::collections::BTreeSet;

use num_traits::One;

use crate::basis::LinearCombination;
use crate::canon::{self, StructureClasses};
use crate::counting::{count_hom, exists_hom, hom_equivalent};
use crate::error::{Error, Result};
use crate::linalg::RowBasis;
use crate::scalar::{ExactScalar, Field};
use crate::structure::Structure;
use crate::{Count, Rational};

/// Black-box evaluator of a function from structures to scalars. Queries
/// may arrive while earlier answers are still being processed.
pub trait CountOracle<C> {
    fn query(&self, structure: &Structure) -> Result<C>;
}

impl<C, F> CountOracle<C> for F
where
    F: Fn(&Structure) -> Result<C>,
{
    fn query(&self, structure: &Structure) -> Result<C> {
        self(structure)
    }
}

/// Oracle answering with `evaluate(lc, ·)`.
pub struct CombinationOracle<'a, C> {
    combination: &'a LinearCombination<C>,
}

impl<'a, C> CombinationOracle<'a, C> {
    pub fn new(combination: &'a LinearCombination<C>) -> Self {
        Self { combination }
    }
}

impl<C: ExactScalar> CountOracle<C> for CombinationOracle<'_, C> {
    fn query(&self, structure: &Structure) -> Result<C> {
        self.combination.evaluate(structure)
    }
}

/// The system `Σ_i y_i · node_i^k = rhs_k` for `k = 0, …, n-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct VandermondeSystem<C> {
    nodes: Vec<C>,
    rhs: Vec<C>,
}

impl<C: Field> VandermondeSystem<C> {
    pub fn new(nodes: Vec<C>, rhs: Vec<C>) -> Result<Self> {
        if nodes.len() != rhs.len() {
            return Err(Error::LengthMismatch { expected: nodes.len(), found: rhs.len() });
        }
        for i in 0..nodes.len() {
            if let Some(j) = (i + 1..nodes.len()).find(|&j| nodes[j] == nodes[i]) {
                return Err(Error::DuplicateNodes(i, j));
            }
        }
        Ok(Self { nodes, rhs })
    }

    pub fn nodes(&self) -> &[C] {
        &self.nodes
    }

    pub fn rhs(&self) -> &[C] {
        &self.rhs
    }

    /// Lagrange-basis inversion: with `L_i(x) = Σ_k c_{ik} x^k` the Lagrange
    /// polynomial of node `i`, `y_i = Σ_k c_{ik} · rhs_k`.
    pub fn solve(&self) -> Vec<C> {
        let n = self.nodes.len();
        // master(x) = Π (x - node_j), coefficients low degree first
        let mut master = vec![C::one()];
        for x in &self.nodes {
            let mut next = vec![C::zero(); master.len() + 1];
            for (k, c) in master.iter().enumerate() {
                next[k + 1] = next[k + 1].clone() + c.clone();
                next[k] = next[k].clone() - c.clone() * x.clone();
            }
            master = next;
        }
        (0..n)
            .map(|i| {
                let xi = &self.nodes[i];
                // master(x) / (x - xi) by synthetic division
                let mut quotient = vec![C::zero(); n];
                let mut carry = C::zero();
                for k in (0..n).rev() {
                    carry = master[k + 1].clone() + carry * xi.clone();
                    quotient[k] = carry.clone();
                }
                let scale = self
                    .nodes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(C::one(), |acc, (_, xj)| acc * (xi.clone() - xj.clone()));
                let dot = quotient
                    .into_iter()
                    .zip(&self.rhs)
                    .fold(C::zero(), |acc, (q, r)| acc + q * r.clone());
                dot / scale
            })
            .collect()
    }
}

pub fn solve_vandermonde<C: Field>(system: &VandermondeSystem<C>) -> Result<Vec<C>> {
    // re-validate: distinct nodes are what makes the system solvable
    VandermondeSystem::new(system.nodes.clone(), system.rhs.clone())?;
    Ok(system.solve())
}

/// Default probe bound for separating two structures.
pub fn separator_bound(b1: &Structure, b2: &Structure) -> usize {
    b1.len().max(b2.len())
}

/// First structure in `(total size, key)` order with at most `max_probe`
/// elements whose hom counts into `b1` and `b2` differ.
pub fn lovasz_separator(b1: &Structure, b2: &Structure, max_probe: usize) -> Result<Structure> {
    if canon::is_isomorphic(b1, b2)? {
        return Err(Error::Isomorphic);
    }
    StructureClasses::new(b1.signature().clone(), max_probe)
        .find(|probe| count_hom(probe, b1).ok() != count_hom(probe, b2).ok())
        .ok_or(Error::ProbeExhausted { max_probe })
}

/// A disjoint union `Σ copies · part`, kept symbolic until the end.
#[derive(Clone, Debug)]
struct ProbeSum {
    parts: Vec<(Structure, u64)>,
}

impl ProbeSum {
    fn hom(&self, target: &Structure) -> Result<Count> {
        let mut total = Count::one();
        for (part, copies) in &self.parts {
            total *= num_traits::pow(count_hom(part, target)?, *copies as usize);
        }
        Ok(total)
    }

    fn materialize(&self) -> Result<Structure> {
        let mut pieces = self
            .parts
            .iter()
            .map(|(p, copies)| if *copies == 1 { Ok(p.clone()) } else { p.n_fold_union(*copies as usize) });
        let first = pieces.next().expect("probe sums are nonempty")?;
        pieces.try_fold(first, |acc, next| acc.disjoint_union(&next?))
    }
}

/// Distinguisher together with its certified values `hom(structure, B_i)`.
#[derive(Clone, Debug)]
pub struct Distinguisher {
    pub structure: Structure,
    pub values: Vec<Count>,
}

fn pairwise_distinct<T: PartialEq>(values: &[T]) -> bool {
    values.iter().enumerate().all(|(i, v)| values[i + 1..].iter().all(|w| w != v))
}

const MAX_MULTIPLIER: u64 = 1 << 63;

fn check_equivalence_class(class: &[Structure]) -> Result<()> {
    if class.is_empty() {
        return Err(Error::NotEquivalentClass("empty class".into()));
    }
    for (i, x) in class.iter().enumerate() {
        for (j, y) in class.iter().enumerate().skip(i + 1) {
            if canon::is_isomorphic(x, y)? {
                return Err(Error::NotEquivalentClass(format!("members {i} and {j} are isomorphic")));
            }
            if !hom_equivalent(x, y)? {
                return Err(Error::NotEquivalentClass(format!(
                    "members {i} and {j} are not homomorphically equivalent"
                )));
            }
        }
    }
    Ok(())
}

/// Builds a structure whose hom counts into the members of a
/// homomorphic-equivalence class are nonzero and pairwise distinct.
///
/// Starts from the first member and adds members one at a time. When the
/// newcomer collides with an earlier member, a separator `A'` for the pair is
/// found and the probe becomes `M·probe + A'` for the first `M` in
/// `1, 2, 4, …` that makes all values distinct, checked via
/// `hom(M·X + Y, B) = hom(X, B)^M · hom(Y, B)`.
pub fn distinguisher(class: &[Structure]) -> Result<Distinguisher> {
    check_equivalence_class(class)?;
    let mut probe = ProbeSum { parts: vec![(class[0].clone(), 1)] };
    let mut values = vec![probe.hom(&class[0])?];
    for k in 1..class.len() {
        let newcomer = probe.hom(&class[k])?;
        let Some(ell) = values.iter().position(|v| *v == newcomer) else {
            values.push(newcomer);
            continue;
        };
        let separator = lovasz_separator(&class[k], &class[ell], separator_bound(&class[k], &class[ell]))?;
        let separated: Vec<Count> = class[..=k].iter().map(|b| count_hom(&separator, b)).collect::<Result<_>>()?;
        let mut current = values.clone();
        current.push(newcomer);
        let mut multiplier: u64 = 1;
        let next = loop {
            let candidate: Vec<Count> = current
                .iter()
                .zip(&separated)
                .map(|(v, s)| num_traits::pow(v.clone(), multiplier as usize) * s)
                .collect();
            if pairwise_distinct(&candidate) {
                break candidate;
            }
            if multiplier >= MAX_MULTIPLIER {
                return Err(Error::MultiplierOverflow);
            }
            multiplier *= 2;
        };
        for (_, copies) in probe.parts.iter_mut() {
            *copies = copies.checked_mul(multiplier).ok_or(Error::MultiplierOverflow)?;
        }
        probe.parts.push((separator, 1));
        values = next;
    }
    Ok(Distinguisher { structure: probe.materialize()?, values })
}

pub fn lovasz_distinguisher(class: &[Structure]) -> Result<Structure> {
    distinguisher(class).map(|d| d.structure)
}

/// Recovered values `hom(a, B_i)` in term order, with the number of oracle
/// queries spent.
#[derive(Clone, Debug)]
pub struct Extraction<C> {
    pub values: Vec<C>,
    pub queries: usize,
}

/// Homomorphic-equivalence classes of the templates, each as term positions
/// sorted by canonical key, plus the reachability relation.
struct ClassStructure {
    classes: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
}

fn equivalence_classes(templates: &[&Structure], keys: &[&canon::CanonicalKey]) -> Result<ClassStructure> {
    let n = templates.len();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            reach[i][j] = i == j || exists_hom(templates[i], templates[j])?;
        }
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut members: Vec<usize> = (i..n).filter(|&j| !assigned[j] && reach[i][j] && reach[j][i]).collect();
        members.sort_by(|&x, &y| keys[x].cmp(keys[y]));
        for &m in &members {
            assigned[m] = true;
        }
        classes.push(members);
    }
    Ok(ClassStructure { classes, reach })
}

impl ClassStructure {
    /// Remaining class whose members map into no other remaining class;
    /// ties go to the smallest least key.
    fn extremal(&self, remaining: &BTreeSet<usize>, keys: &[&canon::CanonicalKey]) -> usize {
        remaining
            .iter()
            .copied()
            .filter(|&c| {
                let rep = self.classes[c][0];
                remaining
                    .iter()
                    .filter(|&&o| o != c)
                    .all(|&o| self.classes[o].iter().all(|&j| !self.reach[rep][j]))
            })
            .min_by(|&x, &y| keys[self.classes[x][0]].cmp(keys[self.classes[y][0]]))
            .expect("a finite preorder has a maximal class")
    }
}

fn to_scalar<C: ExactScalar>(count: &Count) -> Result<C> {
    C::from_count(count).ok_or_else(|| Error::ScalarOverflow(count.to_string()))
}

/// Recovers `(hom(a, B_i))_i` for the terms of `combination` using only
/// oracle answers for `a`-dependent quantities. `oracle` is promised to
/// compute `evaluate(combination, ·)`.
pub fn extract_hom_values<C, O>(combination: &LinearCombination<C>, oracle: &O, a: &Structure) -> Result<Extraction<C>>
where
    C: ExactScalar,
    O: CountOracle<C> + ?Sized,
{
    let terms = combination.terms();
    if terms.is_empty() {
        return Err(Error::EmptyCombination);
    }
    a.check_same_signature(terms[0].structure())?;
    if let [term] = terms {
        let value = oracle.query(a)? / term.coefficient().clone();
        if value.to_count().is_none() {
            return Err(Error::OracleInconsistent(format!("oracle answer gives hom value {value}, not a non-negative integer")));
        }
        return Ok(Extraction { values: vec![value], queries: 1 });
    }
    let templates: Vec<&Structure> = terms.iter().map(|t| t.structure()).collect();
    let keys: Vec<&canon::CanonicalKey> = terms.iter().map(|t| t.key()).collect();
    let layout = equivalence_classes(&templates, &keys)?;

    let mut recovered: Vec<Option<C>> = vec![None; terms.len()];
    let mut resolved: Vec<usize> = Vec::new();
    let mut remaining: BTreeSet<usize> = (0..layout.classes.len()).collect();
    let mut queries = 0;

    while !remaining.is_empty() {
        let c = layout.extremal(&remaining, &keys);
        remaining.remove(&c);
        let members = &layout.classes[c];
        let base = templates[members[0]];
        let class: Vec<Structure> = members.iter().map(|&i| templates[i].clone()).collect();
        let probe = distinguisher(&class)?;

        let nodes: Vec<C> = probe.values.iter().map(to_scalar).collect::<Result<_>>()?;
        let base_homs: Vec<C> =
            members.iter().map(|&i| count_hom(base, templates[i]).and_then(|h| to_scalar(&h))).collect::<Result<_>>()?;
        // Earlier terms: β_r · hom(base, B_r) · hom(a, B_r) and node hom(D, B_r).
        let earlier: Vec<(C, C)> = resolved
            .iter()
            .map(|&r| {
                let weight = terms[r].coefficient().clone()
                    * to_scalar::<C>(&count_hom(base, templates[r])?)?
                    * recovered[r].clone().expect("resolved");
                Ok((weight, to_scalar::<C>(&count_hom(&probe.structure, templates[r])?)?))
            })
            .collect::<Result<_>>()?;

        let mut rhs = Vec::with_capacity(members.len());
        let mut query = base.disjoint_union(a)?;
        let mut power: Vec<C> = vec![C::one(); earlier.len()];
        for k in 0..members.len() {
            if k > 0 {
                query = query.disjoint_union(&probe.structure)?;
            }
            let answer = oracle.query(&query)?;
            queries += 1;
            let known = earlier
                .iter()
                .zip(&power)
                .fold(C::zero(), |acc, ((w, _), p)| acc + w.clone() * p.clone());
            rhs.push(answer - known);
            for (p, (_, node)) in power.iter_mut().zip(&earlier) {
                *p = p.clone() * node.clone();
            }
        }

        let system = VandermondeSystem::new(nodes, rhs)?;
        for ((&i, y), base_hom) in members.iter().zip(system.solve()).zip(base_homs) {
            let value = y / (terms[i].coefficient().clone() * base_hom);
            if value.to_count().is_none() {
                return Err(Error::OracleInconsistent(format!(
                    "recovered hom value {value} for term {i} is not a non-negative integer"
                )));
            }
            recovered[i] = Some(value);
            resolved.push(i);
        }
    }

    let values: Vec<C> = recovered.into_iter().map(|v| v.expect("every class resolved")).collect();
    Ok(Extraction { values, queries })
}

/// Probes `A_1, …, A_n` making `[hom(A_j, B_i)]` nonsingular.
///
/// Candidates are first the class representatives with at most `max_probe`
/// elements in `(total size, key)` order, kept greedily when they raise the
/// rank. If that does not reach full rank, the independence construction
/// follows: for each homomorphic-equivalence class taken extremal-first, the
/// structures `B_1 + k·D` with `D` its distinguisher. Those may exceed
/// `max_probe` elements.
pub fn independence_probe(classes: &[Structure], max_probe: usize) -> Result<Vec<Structure>> {
    let Some(first) = classes.first() else {
        return Ok(Vec::new());
    };
    for (i, x) in classes.iter().enumerate() {
        for y in &classes[i + 1..] {
            if canon::is_isomorphic(x, y)? {
                return Err(Error::Isomorphic);
            }
        }
    }
    let n = classes.len();
    let mut basis = RowBasis::<Rational>::new(n);
    let mut probes = Vec::new();
    let row = |probe: &Structure| -> Result<Vec<Rational>> {
        classes.iter().map(|b| Ok(Rational::from_count(&count_hom(probe, b)?).expect("rational"))).collect()
    };
    for candidate in StructureClasses::new(first.signature().clone(), max_probe) {
        if basis.insert(row(&candidate)?) {
            probes.push(candidate);
            if basis.is_full() {
                return Ok(probes);
            }
        }
    }

    let templates: Vec<&Structure> = classes.iter().collect();
    let owned_keys: Vec<canon::CanonicalKey> = classes.iter().map(canon::canonical_key).collect();
    let keys: Vec<&canon::CanonicalKey> = owned_keys.iter().collect();
    let layout = equivalence_classes(&templates, &keys)?;
    let mut remaining: BTreeSet<usize> = (0..layout.classes.len()).collect();
    while !remaining.is_empty() {
        let c = layout.extremal(&remaining, &keys);
        remaining.remove(&c);
        let members: Vec<Structure> = layout.classes[c].iter().map(|&i| classes[i].clone()).collect();
        let probe = lovasz_distinguisher(&members)?;
        let mut candidate = members[0].clone();
        for k in 0..members.len() {
            if k > 0 {
                candidate = candidate.disjoint_union(&probe)?;
            }
            if basis.insert(row(&candidate)?) {
                probes.push(candidate.clone());
                if basis.is_full() {
                    return Ok(probes);
                }
            }
        }
    }
    Err(Error::ProbeExhausted { max_probe })
}
