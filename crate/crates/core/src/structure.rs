//! Finite relational structures over finite signatures.
//!
//! Elements carry string names for I/O but are addressed internally by their
//! dense position in the universe. Relations are stored as ordered sets of
//! index tuples, one set per signature symbol, in symbol-name order.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relation symbols with their arities, kept in name order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, usize>", into = "BTreeMap<String, usize>")]
pub struct Signature {
    symbols: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut by_name = BTreeMap::new();
        for (name, arity) in symbols {
            let name = name.into();
            if arity == 0 {
                return Err(Error::InvalidArity { symbol: name, arity });
            }
            if by_name.insert(name.clone(), arity).is_some() {
                return Err(Error::DuplicateSymbol(name));
            }
        }
        Ok(Self { symbols: by_name.into_iter().collect() })
    }

    /// The signature `{E: 2}` of directed graphs with loops.
    pub fn digraph() -> Self {
        Self { symbols: vec![("E".to_string(), 2)] }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.symbols.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn name(&self, index: usize) -> &str {
        &self.symbols[index].0
    }

    pub fn arity(&self, index: usize) -> usize {
        self.symbols[index].1
    }

    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.symbols.iter().map(|(_, a)| *a)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.binary_search_by(|(n, _)| n.as_str().cmp(name)).ok()
    }
}

impl TryFrom<BTreeMap<String, usize>> for Signature {
    type Error = Error;

    fn try_from(map: BTreeMap<String, usize>) -> Result<Self> {
        Signature::new(map)
    }
}

impl From<Signature> for BTreeMap<String, usize> {
    fn from(sig: Signature) -> Self {
        sig.symbols.into_iter().collect()
    }
}

/// The interchange form of a structure, exactly as it appears in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub signature: BTreeMap<String, usize>,
    pub universe: Vec<String>,
    pub relations: BTreeMap<String, Vec<Vec<String>>>,
}

/// Checks every structure invariant on the interchange form, reporting the
/// first violation found.
pub fn validate(raw: &RawStructure) -> Result<()> {
    Structure::from_raw(raw).map(|_| ())
}

/// A finite structure with a nonempty universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct Structure {
    signature: Signature,
    universe: Vec<String>,
    relations: Vec<BTreeSet<Vec<usize>>>,
}

impl Structure {
    pub fn from_raw(raw: &RawStructure) -> Result<Self> {
        let signature = Signature::new(raw.signature.iter().map(|(n, a)| (n.clone(), *a)))?;
        if raw.universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut position = HashMap::with_capacity(raw.universe.len());
        for (i, name) in raw.universe.iter().enumerate() {
            if position.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        if let Some(unknown) = raw.relations.keys().find(|k| signature.index_of(k).is_none()) {
            return Err(Error::UnknownSymbol(unknown.clone()));
        }
        let mut relations = Vec::with_capacity(signature.len());
        for (symbol, arity) in signature.symbols() {
            let tuples = raw
                .relations
                .get(symbol)
                .ok_or_else(|| Error::MissingRelation(symbol.to_string()))?;
            let mut set = BTreeSet::new();
            for tuple in tuples {
                if tuple.len() != arity {
                    return Err(Error::ArityMismatch {
                        symbol: symbol.to_string(),
                        tuple: tuple.clone(),
                        expected: arity,
                        found: tuple.len(),
                    });
                }
                let indices = tuple
                    .iter()
                    .map(|e| {
                        position.get(e.as_str()).copied().ok_or_else(|| Error::ForeignElement {
                            element: e.clone(),
                            context: format!("relation {symbol:?}"),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if !set.insert(indices) {
                    return Err(Error::DuplicateTuple {
                        symbol: symbol.to_string(),
                        tuple: tuple.clone(),
                    });
                }
            }
            relations.push(set);
        }
        Ok(Self { signature, universe: raw.universe.clone(), relations })
    }

    pub fn to_raw(&self) -> RawStructure {
        let relations = self
            .signature
            .symbols()
            .zip(&self.relations)
            .map(|((name, _), tuples)| {
                let named = tuples
                    .iter()
                    .map(|t| t.iter().map(|&i| self.universe[i].clone()).collect())
                    .collect();
                (name.to_string(), named)
            })
            .collect();
        RawStructure {
            signature: self.signature.clone().into(),
            universe: self.universe.clone(),
            relations,
        }
    }

    /// Builds a structure on elements named `"0"`, …, `"n-1"` from index
    /// tuples, one list per symbol in signature order.
    pub fn from_indices(signature: Signature, size: usize, relations: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let universe = (0..size).map(|i| i.to_string()).collect();
        Self::from_named_indices(signature, universe, relations)
    }

    /// Like [`Structure::from_indices`] with explicit element names.
    pub fn from_named_indices(
        signature: Signature,
        universe: Vec<String>,
        relations: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut seen = BTreeSet::new();
        if let Some(dup) = universe.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::DuplicateElement(dup.clone()));
        }
        if relations.len() != signature.len() {
            return Err(Error::LengthMismatch { expected: signature.len(), found: relations.len() });
        }
        let names = |t: &[usize]| t.iter().map(|i| i.to_string()).collect::<Vec<_>>();
        let mut sets = Vec::with_capacity(relations.len());
        for (r, tuples) in relations.into_iter().enumerate() {
            let symbol = signature.name(r).to_string();
            let arity = signature.arity(r);
            let mut set = BTreeSet::new();
            for tuple in tuples {
                if tuple.len() != arity {
                    return Err(Error::ArityMismatch { symbol, tuple: names(&tuple), expected: arity, found: tuple.len() });
                }
                if let Some(&bad) = tuple.iter().find(|&&i| i >= universe.len()) {
                    return Err(Error::ForeignElement { element: bad.to_string(), context: format!("relation {symbol:?}") });
                }
                if !set.insert(tuple.clone()) {
                    return Err(Error::DuplicateTuple { symbol, tuple: names(&tuple) });
                }
            }
            sets.push(set);
        }
        Ok(Self { signature, universe, relations: sets })
    }

    /// Trusted constructor for internal derivations of valid structures.
    pub(crate) fn from_parts(signature: Signature, universe: Vec<String>, relations: Vec<BTreeSet<Vec<usize>>>) -> Self {
        debug_assert!(!universe.is_empty());
        debug_assert_eq!(relations.len(), signature.len());
        Self { signature, universe, relations }
    }

    /// A digraph over `{E: 2}` on elements `"0"`, …, `"n-1"`.
    pub fn digraph(size: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let tuples = edges.iter().map(|&(u, v)| vec![u, v]).collect();
        Self::from_indices(Signature::digraph(), size, vec![tuples])
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.universe.len()
    }

    /// Always false; universes are nonempty.
    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// Tuples of the symbol at `index` in signature order.
    pub fn relation(&self, index: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[index]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&BTreeSet<Vec<usize>>> {
        self.signature.index_of(name).map(|i| &self.relations[i])
    }

    pub fn relations(&self) -> &[BTreeSet<Vec<usize>>] {
        &self.relations
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    /// `|universe|` plus the number of tuples over all relations.
    pub fn total_size(&self) -> usize {
        self.len() + self.tuple_count()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|n| n == name)
    }

    pub(crate) fn check_same_signature(&self, other: &Structure) -> Result<()> {
        if self.signature == other.signature {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// The substructure induced by the named elements.
    pub fn induced_substructure<S: AsRef<str>>(&self, subset: &[S]) -> Result<Structure> {
        let mut chosen = BTreeSet::new();
        for name in subset {
            let name = name.as_ref();
            let idx = self.position(name).ok_or_else(|| Error::ForeignElement {
                element: name.to_string(),
                context: "subset".to_string(),
            })?;
            chosen.insert(idx);
        }
        if chosen.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        Ok(self.induced(&chosen.into_iter().collect::<Vec<_>>()))
    }

    /// The substructure induced by strictly increasing element indices.
    pub fn induced(&self, subset: &[usize]) -> Structure {
        debug_assert!(!subset.is_empty());
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        let mut new_index = vec![usize::MAX; self.len()];
        for (j, &i) in subset.iter().enumerate() {
            new_index[i] = j;
        }
        let relations = self
            .relations
            .iter()
            .map(|tuples| {
                tuples
                    .iter()
                    .filter(|t| t.iter().all(|&e| new_index[e] != usize::MAX))
                    .map(|t| t.iter().map(|&e| new_index[e]).collect())
                    .collect()
            })
            .collect();
        let universe = subset.iter().map(|&i| self.universe[i].clone()).collect();
        Structure::from_parts(self.signature.clone(), universe, relations)
    }

    /// Lazily yields the substructure induced by every nonempty subset of
    /// the universe, `2^n - 1` items in total.
    pub fn induced_substructures(&self) -> InducedSubstructures<'_> {
        assert!(self.len() < 64, "at most 63 elements supported for subset enumeration");
        InducedSubstructures { structure: self, mask: 1, end: 1u64 << self.len() }
    }

    /// Lazily yields every deduct, `2^(tuple count)` items, the structure
    /// itself first.
    pub fn deducts(&self) -> Deducts<'_> {
        let atoms: Vec<(usize, Vec<usize>)> = self
            .relations
            .iter()
            .enumerate()
            .flat_map(|(r, ts)| ts.iter().map(move |t| (r, t.clone())))
            .collect();
        assert!(atoms.len() < 64, "at most 63 tuples supported for deduct enumeration");
        let full = (1u64 << atoms.len()) - 1;
        Deducts { structure: self, atoms, next: Some(full) }
    }

    /// The deduct keeping exactly the tuples selected by `keep`, indexed in
    /// flattened signature order.
    fn deduct_from_mask(&self, atoms: &[(usize, Vec<usize>)], keep: u64) -> Structure {
        let mut relations = vec![BTreeSet::new(); self.signature.len()];
        for (bit, (r, t)) in atoms.iter().enumerate() {
            if keep >> bit & 1 == 1 {
                relations[*r].insert(t.clone());
            }
        }
        Structure::from_parts(self.signature.clone(), self.universe.clone(), relations)
    }

    /// Disjoint union; elements are renamed `0.x` and `1.y`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        self.check_same_signature(other)?;
        let offset = self.len();
        let universe = self
            .universe
            .iter()
            .map(|n| format!("0.{n}"))
            .chain(other.universe.iter().map(|n| format!("1.{n}")))
            .collect();
        let relations = self
            .relations
            .iter()
            .zip(&other.relations)
            .map(|(left, right)| {
                left.iter()
                    .cloned()
                    .chain(right.iter().map(|t| t.iter().map(|&e| e + offset).collect()))
                    .collect()
            })
            .collect();
        Ok(Structure::from_parts(self.signature.clone(), universe, relations))
    }

    /// `copies` disjoint copies; copy `k` renames element `x` to `k.x`.
    pub fn n_fold_union(&self, copies: usize) -> Result<Structure> {
        if copies == 0 {
            return Err(Error::ZeroCopies);
        }
        let n = self.len();
        let universe = (0..copies)
            .flat_map(|k| self.universe.iter().map(move |x| format!("{k}.{x}")))
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|tuples| {
                (0..copies)
                    .flat_map(|k| tuples.iter().map(move |t| t.iter().map(|&e| e + k * n).collect()))
                    .collect()
            })
            .collect();
        Ok(Structure::from_parts(self.signature.clone(), universe, relations))
    }

    /// Moves element `i` to position `perm[i]`, carrying its name along.
    pub fn permuted(&self, perm: &[usize]) -> Structure {
        assert_eq!(perm.len(), self.len());
        let mut universe = vec![String::new(); self.len()];
        for (i, &p) in perm.iter().enumerate() {
            universe[p] = self.universe[i].clone();
        }
        Structure::from_parts(self.signature.clone(), universe, self.mapped_relations(perm))
    }

    /// Same tuples under new element names.
    pub fn renamed(&self, names: Vec<String>) -> Result<Structure> {
        let rels = self.relations.iter().map(|ts| ts.iter().cloned().collect()).collect();
        Structure::from_named_indices(self.signature.clone(), names, rels)
    }

    pub(crate) fn mapped_relations(&self, perm: &[usize]) -> Vec<BTreeSet<Vec<usize>>> {
        self.relations
            .iter()
            .map(|ts| ts.iter().map(|t| t.iter().map(|&e| perm[e]).collect()).collect())
            .collect()
    }

    /// Connected components of the Gaifman graph as strictly increasing
    /// index lists, ordered by smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for tuple in self.relations.iter().flatten() {
            for w in tuple.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..self.len() {
            let root = find(&mut parent, x);
            groups.entry(root).or_default().push(x);
        }
        groups.into_values().collect()
    }
}

impl TryFrom<RawStructure> for Structure {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        Structure::from_raw(&raw)
    }
}

impl From<Structure> for RawStructure {
    fn from(s: Structure) -> Self {
        s.to_raw()
    }
}

pub struct InducedSubstructures<'a> {
    structure: &'a Structure,
    mask: u64,
    end: u64,
}

impl Iterator for InducedSubstructures<'_> {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        if self.mask >= self.end {
            return None;
        }
        let subset = mask_to_indices(self.mask);
        self.mask += 1;
        Some(self.structure.induced(&subset))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.mask) as usize;
        (left, Some(left))
    }
}

pub struct Deducts<'a> {
    structure: &'a Structure,
    atoms: Vec<(usize, Vec<usize>)>,
    next: Option<u64>,
}

impl Iterator for Deducts<'_> {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        let keep = self.next?;
        self.next = keep.checked_sub(1);
        Some(self.structure.deduct_from_mask(&self.atoms, keep))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.next.map_or(0, |k| k as usize + 1);
        (left, Some(left))
    }
}

pub(crate) fn mask_to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}
