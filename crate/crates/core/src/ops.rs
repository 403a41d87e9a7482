//! Constructive set theory constructions on certified sets.
//!
//! Everything here is total on [`VsetId`]s. Constructions that collapse a family of values to a
//! set go through [`Store::image`], which deduplicates.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::mset::Store;
use crate::vset::VsetId;

/// One witness of a Σ-hypothesis: the chosen value and which proof of the relation produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub value: VsetId,
    pub evidence: usize,
}

/// Computational content of a hypothesis of the shape "for every x in a there is some y with
/// ...": a finite map from the elements of a domain set to chosen witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessMap {
    entries: BTreeMap<VsetId, Witness>,
}

impl WitnessMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a map over the elements of `domain` from a choice function.
    pub fn from_fn(
        store: &Store,
        domain: VsetId,
        mut choose: impl FnMut(VsetId) -> VsetId,
    ) -> Self {
        let entries = store
            .elements(domain)
            .into_iter()
            .map(|x| {
                (
                    x,
                    Witness {
                        value: choose(x),
                        evidence: 0,
                    },
                )
            })
            .collect();
        WitnessMap { entries }
    }

    pub fn insert(&mut self, x: VsetId, value: VsetId, evidence: usize) -> Option<Witness> {
        self.entries.insert(x, Witness { value, evidence })
    }

    pub fn get(&self, x: VsetId) -> Option<VsetId> {
        self.entries.get(&x).map(|w| w.value)
    }

    pub fn witness(&self, x: VsetId) -> Option<&Witness> {
        self.entries.get(&x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn keys(&self) -> impl Iterator<Item = VsetId> + '_ {
        self.entries.keys().copied()
    }

    pub fn values(&self) -> impl Iterator<Item = VsetId> + '_ {
        self.entries.values().map(|w| w.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VsetId, VsetId)> + '_ {
        self.entries.iter().map(|(&x, w)| (x, w.value))
    }

    fn check_domain(&self, store: &Store, a: VsetId) -> Result<()> {
        let dom: BTreeSet<VsetId> = store.elements(a).into_iter().collect();
        if dom.len() == self.entries.len() && self.keys().all(|k| dom.contains(&k)) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }
}

/// Where [`Store::replacement_rel`] looks for the unique witness of each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchSpace {
    /// All sets of rank at most the given bound.
    Rank(usize),
    Explicit(Vec<VsetId>),
}

impl SearchSpace {
    /// Sets of rank up to two more than the domain.
    pub fn default_for(store: &Store, a: VsetId) -> Self {
        SearchSpace::Rank(store.rank(a.mset()) + 2)
    }

    fn resolve(&self, store: &Store) -> Result<Vec<VsetId>> {
        match self {
            SearchSpace::Rank(n) => store.enumerate_vsets(*n),
            SearchSpace::Explicit(v) => Ok(v.clone()),
        }
    }
}

/// Memoized ∈-recursion: `eval(x)` is `step(x, [eval(e) for e in elements(x)])`.
pub struct EpsRecursion<'s, R, F> {
    store: &'s Store,
    step: F,
    memo: HashMap<VsetId, R>,
}

impl<R: Clone, F: FnMut(VsetId, &[R]) -> R> EpsRecursion<'_, R, F> {
    pub fn eval(&mut self, x: VsetId) -> R {
        if let Some(r) = self.memo.get(&x) {
            return r.clone();
        }
        let below: Vec<R> = self
            .store
            .elements(x)
            .into_iter()
            .map(|e| self.eval(e))
            .collect();
        let r = (self.step)(x, &below);
        self.memo.insert(x, r.clone());
        r
    }
}

impl Store {
    pub fn empty(&self) -> VsetId {
        self.image([])
    }

    /// Von Neumann numeral: `0 = {}`, `n + 1 = n ∪ {n}`.
    pub fn nat(&self, n: usize) -> VsetId {
        let mut cur = self.empty();
        for _ in 0..n {
            let mut els = self.elements(cur);
            els.push(cur);
            cur = self.image(els);
        }
        cur
    }

    pub fn singleton(&self, x: VsetId) -> VsetId {
        self.image([x])
    }

    pub fn pair_set(&self, x: VsetId, y: VsetId) -> VsetId {
        self.image([x, y])
    }

    pub fn union(&self, x: VsetId) -> VsetId {
        let members: Vec<VsetId> = self
            .elements(x)
            .into_iter()
            .flat_map(|y| self.elements(y))
            .collect();
        self.image(members)
    }

    /// Binary union, `∪{x, y}`.
    pub fn union2(&self, x: VsetId, y: VsetId) -> VsetId {
        self.union(self.pair_set(x, y))
    }

    /// The subset of `x` whose elements satisfy `pred`.
    pub fn separation(&self, x: VsetId, mut pred: impl FnMut(VsetId) -> bool) -> VsetId {
        // A subfamily of an injective family is injective; no deduplication needed.
        let kept: Vec<_> = self
            .elements(x)
            .into_iter()
            .filter(|&z| pred(z))
            .map(VsetId::mset)
            .collect();
        self.to_vset(self.mk_sup(&kept))
            .expect("subset of a set is a set")
    }

    pub fn eps_induction<R, F>(&self, step: F) -> EpsRecursion<'_, R, F>
    where
        R: Clone,
        F: FnMut(VsetId, &[R]) -> R,
    {
        EpsRecursion {
            store: self,
            step,
            memo: HashMap::new(),
        }
    }

    /// Kuratowski pair `{{x}, {x, y}}`.
    pub fn ordered_pair(&self, x: VsetId, y: VsetId) -> VsetId {
        self.pair_set(self.singleton(x), self.pair_set(x, y))
    }

    /// Inverse of [`Store::ordered_pair`]; `None` if `z` is not a Kuratowski pair.
    pub fn unpair(&self, z: VsetId) -> Option<(VsetId, VsetId)> {
        let els = self.elements(z);
        let (x, y) = match els.as_slice() {
            [only] => match self.elements(*only).as_slice() {
                [x] => (*x, *x),
                _ => return None,
            },
            [p, q] => {
                let (p_els, q_els) = (self.elements(*p), self.elements(*q));
                let (single, double) = match (p_els.len(), q_els.len()) {
                    (1, 2) => (p_els, q_els),
                    (2, 1) => (q_els, p_els),
                    _ => return None,
                };
                let x = single[0];
                let y = match double.as_slice() {
                    [a, b] if *a == x => *b,
                    [a, b] if *b == x => *a,
                    _ => return None,
                };
                (x, y)
            }
            _ => return None,
        };
        (self.ordered_pair(x, y) == z).then_some((x, y))
    }

    /// Whether `f` is the graph of a total function from `a` to `b`.
    pub fn is_fun(&self, a: VsetId, b: VsetId, f: VsetId) -> bool {
        let mut hits: HashMap<VsetId, usize> = HashMap::new();
        for z in self.elements(f) {
            let Some((x, y)) = self.unpair(z) else {
                return false;
            };
            if !self.member(x, a) || !self.member(y, b) {
                return false;
            }
            *hits.entry(x).or_default() += 1;
        }
        self.elements(a)
            .into_iter()
            .all(|x| hits.get(&x) == Some(&1))
    }

    /// Graph `{⟨x, g x⟩ : x ∈ a}` of an explicit table.
    fn graph(&self, pairs: impl IntoIterator<Item = (VsetId, VsetId)>) -> VsetId {
        let pairs: Vec<_> = pairs
            .into_iter()
            .map(|(x, y)| self.ordered_pair(x, y))
            .collect();
        self.image(pairs)
    }

    /// Calls `visit` with every table from `elements(a)` to `elements(b)`, after checking that
    /// there are at most `max_elements` of them.
    fn for_each_table(
        &self,
        a: VsetId,
        b: VsetId,
        what: &'static str,
        mut visit: impl FnMut(&[VsetId], &[VsetId]),
    ) -> Result<()> {
        let dom = self.elements(a);
        let cod = self.elements(b);
        let cap = self.limits().max_elements;
        let total = u32::try_from(dom.len())
            .ok()
            .and_then(|n| (cod.len() as u128).checked_pow(n))
            .filter(|&t| t <= cap as u128)
            .ok_or_else(|| Error::Resource {
                what,
                needed: format!("{}^{} functions", cod.len(), dom.len()),
                limit: cap,
            })?;
        let mut digits = vec![0usize; dom.len()];
        let mut values = Vec::with_capacity(dom.len());
        for _ in 0..total {
            values.clear();
            values.extend(digits.iter().map(|&d| cod[d]));
            visit(&dom, &values);
            for d in digits.iter_mut() {
                *d += 1;
                if *d < cod.len() {
                    break;
                }
                *d = 0;
            }
        }
        Ok(())
    }

    /// The set of graphs of all functions from `a` to `b`.
    pub fn exp(&self, a: VsetId, b: VsetId) -> Result<VsetId> {
        let mut graphs = Vec::new();
        self.for_each_table(a, b, "exponential", |dom, vals| {
            graphs.push(self.graph(dom.iter().copied().zip(vals.iter().copied())));
        })?;
        Ok(self.image(graphs))
    }

    /// Replacement for a relation that is functional on `a`: collects, for each element `x`,
    /// the unique `y` in `search` with `rel(x, y)`. Uniqueness is checked only inside the search
    /// space.
    pub fn replacement_rel(
        &self,
        a: VsetId,
        mut rel: impl FnMut(VsetId, VsetId) -> bool,
        search: &SearchSpace,
    ) -> Result<VsetId> {
        let elements = self.elements(a);
        if elements.is_empty() {
            return Ok(self.empty());
        }
        let candidates = search.resolve(self)?;
        let mut chosen = Vec::with_capacity(elements.len());
        for x in elements {
            let mut found = candidates.iter().copied().filter(|&y| rel(x, y));
            let y = found.next().ok_or_else(|| Error::NoWitness {
                x: self.show_set(x),
            })?;
            if let Some(y2) = found.next() {
                return Err(Error::NotUnique {
                    x: self.show_set(x),
                    y1: self.show_set(y),
                    y2: self.show_set(y2),
                });
            }
            chosen.push(y);
        }
        Ok(self.image(chosen))
    }

    /// Replacement for an operation: the image of `f` over the elements of `a`.
    pub fn replacement_fun(&self, a: VsetId, f: impl FnMut(VsetId) -> VsetId) -> VsetId {
        let values: Vec<_> = self.elements(a).into_iter().map(f).collect();
        self.image(values)
    }

    /// The graph of the witness map, after checking it is total on `a` and lands in `b`.
    pub fn choice_function(&self, a: VsetId, b: VsetId, w: &WitnessMap) -> Result<VsetId> {
        w.check_domain(self, a)?;
        if let Some((x, y)) = w.iter().find(|&(_, y)| !self.member(y, b)) {
            return Err(Error::CodomainViolation {
                x: self.show_set(x),
                y: self.show_set(y),
            });
        }
        Ok(self.graph(w.iter()))
    }

    /// Strong collection with Σ-witnesses: the image of the witness values.
    pub fn strong_collection(&self, a: VsetId, w: &WitnessMap) -> Result<VsetId> {
        w.check_domain(self, a)?;
        Ok(self.image(w.values()))
    }

    /// The set of images of all functions from `a` to `b`.
    pub fn subset_collection(&self, a: VsetId, b: VsetId) -> Result<VsetId> {
        let mut images = Vec::new();
        self.for_each_table(a, b, "subset collection", |_, vals| {
            images.push(self.image(vals.iter().copied()));
        })?;
        Ok(self.image(images))
    }
}
