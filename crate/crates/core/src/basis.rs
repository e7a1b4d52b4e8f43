//! Hom-basis expansions of `Surjhom(·, B)` and `Condens(·, B)`.
//!
//! `Surjhom(·, B)` is `hom(·, B)` minus `Indsub(B', B) · Surjhom(·, B')` for
//! every class `B'` of proper induced substructures; recursing on smaller
//! universes yields a combination of template functions. `Condens(·, B)` is
//! first written over surjection counts by the analogous recursion over
//! proper deducts (same universe, fewer tuples) and then rewritten with the
//! surjection expansions. Expansions are memoised per isomorphism class.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::canon::{self, canonical_key, CanonicalKey, OrderKey};
use crate::counting;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{ExactScalar, Field};
use crate::structure::{Signature, Structure};
use crate::{Expansion, Rational, RationalMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpansionKind {
    Surjhom,
    Condens,
}

impl ExpansionKind {
    /// The count this kind of expansion reproduces.
    pub fn count(self, a: &Structure, b: &Structure) -> Result<crate::Count> {
        match self {
            ExpansionKind::Surjhom => counting::count_surjhom(a, b),
            ExpansionKind::Condens => counting::count_condens(a, b),
        }
    }

    pub fn expand(self, b: &Structure) -> Expansion {
        match self {
            ExpansionKind::Surjhom => expand_surjhom(b),
            ExpansionKind::Condens => expand_condens(b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<C> {
    coefficient: C,
    structure: Structure,
    key: CanonicalKey,
}

impl<C> Term<C> {
    pub fn coefficient(&self) -> &C {
        &self.coefficient
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn key(&self) -> &CanonicalKey {
        &self.key
    }

    fn order_key(&self) -> OrderKey {
        (self.structure.total_size(), self.key.clone())
    }
}

/// A finite combination `Σ β_i · hom(·, B_i)` with nonzero coefficients,
/// pairwise non-isomorphic structures, terms in `(total size, key)` order.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCombination<C> {
    terms: Vec<Term<C>>,
}

/// Merges terms by isomorphism class.
struct Accumulator<C> {
    terms: BTreeMap<OrderKey, (C, Structure)>,
}

impl<C: Field> Accumulator<C> {
    fn new() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn add_keyed(&mut self, order: OrderKey, coefficient: C, structure: &Structure) {
        match self.terms.get_mut(&order) {
            Some((c, _)) => *c = c.clone() + coefficient,
            None => {
                self.terms.insert(order, (coefficient, structure.clone()));
            }
        }
    }

    fn add(&mut self, coefficient: C, structure: &Structure) {
        self.add_keyed(canon::order_key(structure), coefficient, structure);
    }

    fn finish(self) -> LinearCombination<C> {
        let terms = self
            .terms
            .into_iter()
            .filter(|(_, (c, _))| !c.is_zero())
            .map(|((_, key), (coefficient, structure))| Term { coefficient, structure, key })
            .collect();
        LinearCombination { terms }
    }
}

impl<C: Field> LinearCombination<C> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// Normalising constructor: merges isomorphic structures, drops zero
    /// coefficients and sorts.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, Structure)>,
    {
        let mut acc = Accumulator::new();
        let mut signature: Option<Signature> = None;
        for (c, s) in terms {
            match &signature {
                Some(sig) if sig != s.signature() => return Err(Error::SignatureMismatch),
                Some(_) => {}
                None => signature = Some(s.signature().clone()),
            }
            acc.add(c, &s);
        }
        Ok(acc.finish())
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.terms.first().map(|t| t.structure.signature())
    }

    /// Coefficient of the term isomorphic to `s`, if any.
    pub fn coefficient_of(&self, s: &Structure) -> Option<&C> {
        let key = canonical_key(s);
        self.terms.iter().find(|t| t.structure.signature() == s.signature() && t.key == key).map(|t| &t.coefficient)
    }

    pub fn try_map_coefficients<D: Field>(&self, mut f: impl FnMut(&C) -> Option<D>) -> Option<LinearCombination<D>> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Some(Term { coefficient: f(&t.coefficient)?, structure: t.structure.clone(), key: t.key.clone() })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(LinearCombination::from_sorted(terms))
    }

    /// Terms already sorted and non-isomorphic; zeros are dropped.
    fn from_sorted(terms: Vec<Term<C>>) -> Self {
        Self { terms: terms.into_iter().filter(|t| !t.coefficient.is_zero()).collect() }
    }

    /// The sub-combination of the given term positions.
    pub fn restricted(&self, positions: &[usize]) -> Self {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Self::from_sorted(sorted.into_iter().map(|i| self.terms[i].clone()).collect())
    }
}

impl<C: ExactScalar> LinearCombination<C> {
    /// `Σ β_i · hom(a, B_i)`, exactly.
    pub fn evaluate(&self, a: &Structure) -> Result<C> {
        let mut total = C::zero();
        for t in &self.terms {
            let count = counting::count_hom(a, &t.structure)?;
            let value = C::from_count(&count).ok_or_else(|| Error::ScalarOverflow(count.to_string()))?;
            total = total + t.coefficient.clone() * value;
        }
        Ok(total)
    }
}

pub fn evaluate<C: ExactScalar>(lc: &LinearCombination<C>, a: &Structure) -> Result<C> {
    lc.evaluate(a)
}

fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn count_rational(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Memoising expander; one instance may serve many templates.
#[derive(Default)]
pub struct Expander {
    surjhom: HashMap<(Signature, CanonicalKey), Expansion>,
    condens_over_surjhom: HashMap<(Signature, CanonicalKey), Expansion>,
}

impl Expander {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn surjhom(&mut self, b: &Structure) -> Expansion {
        let memo_key = (b.signature().clone(), canonical_key(b));
        if let Some(done) = self.surjhom.get(&memo_key) {
            return done.clone();
        }
        let mut acc = Accumulator::new();
        acc.add_keyed((b.total_size(), memo_key.1.clone()), Rational::one(), b);
        for class in canon::proper_induced_classes(b) {
            let multiplicity = count_rational(class.count);
            for t in self.surjhom(&class.representative).terms {
                acc.add_keyed(t.order_key(), -(multiplicity.clone() * t.coefficient), &t.structure);
            }
        }
        let expansion = acc.finish();
        self.surjhom.insert(memo_key, expansion.clone());
        expansion
    }

    /// `Condens(·, b)` as a combination of `Surjhom(·, C)` functions; the
    /// returned terms name the structures `C`.
    pub fn condens_over_surjhom(&mut self, b: &Structure) -> Expansion {
        let memo_key = (b.signature().clone(), canonical_key(b));
        if let Some(done) = self.condens_over_surjhom.get(&memo_key) {
            return done.clone();
        }
        let mut acc = Accumulator::new();
        acc.add_keyed((b.total_size(), memo_key.1.clone()), Rational::one(), b);
        for class in canon::proper_deduct_classes(b) {
            let multiplicity = count_rational(class.count);
            for t in self.condens_over_surjhom(&class.representative).terms {
                acc.add_keyed(t.order_key(), -(multiplicity.clone() * t.coefficient), &t.structure);
            }
        }
        let expansion = acc.finish();
        self.condens_over_surjhom.insert(memo_key, expansion.clone());
        expansion
    }

    pub fn condens(&mut self, b: &Structure) -> Expansion {
        let mut acc = Accumulator::new();
        for outer in self.condens_over_surjhom(b).terms {
            for inner in self.surjhom(&outer.structure).terms {
                acc.add_keyed(inner.order_key(), outer.coefficient.clone() * inner.coefficient, &inner.structure);
            }
        }
        acc.finish()
    }
}

/// Hom-basis expansion of `Surjhom(·, b)`.
pub fn expand_surjhom(b: &Structure) -> Expansion {
    Expander::new().surjhom(b)
}

/// Hom-basis expansion of `Condens(·, b)`.
pub fn expand_condens(b: &Structure) -> Expansion {
    Expander::new().condens(b)
}

/// `Surjhom(·, b)` by Möbius inversion on the lattice of element subsets:
/// the subset `S` contributes `(-1)^{|B|-|S|} · hom(·, b[S])`.
pub fn mobius_expand_surjhom(b: &Structure) -> Expansion {
    let mut acc = Accumulator::new();
    for sub in b.induced_substructures() {
        let sign = if (b.len() - sub.len()) % 2 == 0 { 1 } else { -1 };
        acc.add(rational(sign), &sub);
    }
    acc.finish()
}

/// Largest slice [`matrix_views`] will materialise.
pub const SLICE_LIMIT: usize = 200;

/// The five count matrices restricted to the classes with at most
/// `max_universe` elements; row and column `i` refer to `index[i]`.
#[derive(Clone, Debug)]
pub struct MatrixView {
    pub index: Vec<Structure>,
    pub hom: RationalMatrix,
    pub surjhom: RationalMatrix,
    pub condens: RationalMatrix,
    pub indsub: RationalMatrix,
    pub deducts: RationalMatrix,
}

pub fn matrix_views(signature: &Signature, max_universe: usize) -> Result<MatrixView> {
    let index: Vec<Structure> =
        canon::StructureClasses::new(signature.clone(), max_universe).take(SLICE_LIMIT + 1).collect();
    if index.len() > SLICE_LIMIT {
        return Err(Error::SliceTooLarge { limit: SLICE_LIMIT });
    }
    let n = index.len();
    let build = |f: &dyn Fn(&Structure, &Structure) -> Result<Rational>| -> Result<RationalMatrix> {
        let mut m = Matrix::zeros(n, n);
        for (i, a) in index.iter().enumerate() {
            for (j, b) in index.iter().enumerate() {
                m.set(i, j, f(a, b)?);
            }
        }
        Ok(m)
    };
    let from_count = |c: crate::Count| Rational::from_integer(BigInt::from(c));
    Ok(MatrixView {
        hom: build(&|a, b| counting::count_hom(a, b).map(from_count))?,
        surjhom: build(&|a, b| counting::count_surjhom(a, b).map(from_count))?,
        condens: build(&|a, b| counting::count_condens(a, b).map(from_count))?,
        indsub: build(&|a, b| canon::indsub_count(a, b).map(count_rational))?,
        deducts: build(&|a, b| canon::deducts_count(a, b).map(count_rational))?,
        index,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `Hom* = Surjhom* · Indsub*`
    HomFactorization,
    /// `Surjhom* = Condens* · Deducts*`
    SurjhomFactorization,
    IndsubUnitriangular,
    DeductsUnitriangular,
    /// Index order respects total size.
    SizeOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub dimension: usize,
    pub violations: Vec<Violation>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn product_violations(
    identity: Identity,
    lhs: &RationalMatrix,
    left: &RationalMatrix,
    right: &RationalMatrix,
    out: &mut Vec<Violation>,
) {
    let product = left.mul(right).expect("square matrices of one slice");
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            if product[(i, j)] != lhs[(i, j)] {
                out.push(Violation { identity, row: i, col: j });
            }
        }
    }
}

pub fn verify_matrix_identities(mv: &MatrixView) -> IdentityReport {
    let mut violations = Vec::new();
    for (i, w) in mv.index.windows(2).enumerate() {
        if w[0].total_size() > w[1].total_size() {
            violations.push(Violation { identity: Identity::SizeOrder, row: i, col: i + 1 });
        }
    }
    product_violations(Identity::HomFactorization, &mv.hom, &mv.surjhom, &mv.indsub, &mut violations);
    product_violations(Identity::SurjhomFactorization, &mv.surjhom, &mv.condens, &mv.deducts, &mut violations);
    for (identity, m) in [(Identity::IndsubUnitriangular, &mv.indsub), (Identity::DeductsUnitriangular, &mv.deducts)] {
        violations.extend(m.unitriangular_violations().into_iter().map(|(row, col)| Violation { identity, row, col }));
    }
    IdentityReport { dimension: mv.index.len(), violations }
}
