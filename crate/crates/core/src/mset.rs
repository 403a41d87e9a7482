//! Interned hereditarily finite iterative multisets.
//!
//! A multiset is a finite bag of previously interned multisets. Every bag is kept in canonical
//! form (children sorted by id, duplicates merged into a multiplicity) and interned, so two
//! multisets are extensionally equal exactly when their ids are equal. Because a node can only
//! reference ids that already exist, the child graph is acyclic and every multiset is
//! well-founded.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use parking_lot::RwLock;

use crate::error::{Error, Result};

/// Number of occurrences of a child in a bag. Always at least 1 inside a node.
pub type Multiplicity = u64;

/// Handle of an interned multiset. Only meaningful together with the [`Store`] that issued it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MsetId(u32);

impl MsetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for MsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An interned node: the canonical bag plus a few facts computed once at interning time.
#[derive(Clone, Debug)]
pub struct MNode {
    children: Arc<[(MsetId, Multiplicity)]>,
    rank: usize,
    width: Multiplicity,
    hereditary_width: Multiplicity,
    set_like: bool,
}

impl MNode {
    /// The bag, sorted by strictly increasing id.
    pub fn children(&self) -> &[(MsetId, Multiplicity)] {
        &self.children
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Total number of child occurrences (sum of multiplicities).
    pub fn width(&self) -> Multiplicity {
        self.width
    }

    /// Largest width of any node reachable from this one, itself included.
    pub fn hereditary_width(&self) -> Multiplicity {
        self.hereditary_width
    }

    /// Whether every reachable node has all multiplicities equal to 1.
    pub fn is_set_like(&self) -> bool {
        self.set_like
    }
}

/// Caps on the size of anything the library materializes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of elements an enumeration or construction may produce.
    pub max_elements: usize,
    /// Largest number of decimal digits a sigma count may reach.
    pub max_count_digits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: 100_000,
            max_count_digits: 10_000,
        }
    }
}

#[derive(Default)]
struct Table {
    nodes: Vec<MNode>,
    index: HashMap<Arc<[(MsetId, Multiplicity)]>, MsetId>,
}

/// Write-once memo tables shared by the derived operations.
#[derive(Default)]
pub(crate) struct Memo {
    pub(crate) literal: RwLock<HashMap<MsetId, Arc<str>>>,
    pub(crate) image: RwLock<HashMap<MsetId, MsetId>>,
    pub(crate) bisim: RwLock<HashMap<(MsetId, MsetId), bool>>,
}

/// The intern table. Lookups take a shared lock and insertion is serialized, so the same
/// canonical bag interned from several threads always receives a single id.
pub struct Store {
    table: RwLock<Table>,
    limits: Limits,
    pub(crate) memo: Memo,
}

impl Default for Store {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Debug for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Store")
            .field("nodes", &self.len())
            .field("limits", &self.limits)
            .finish()
    }
}

impl Store {
    pub fn new() -> Self {
        Self::with_limits(Limits::default())
    }

    pub fn with_limits(limits: Limits) -> Self {
        let store = Store {
            table: RwLock::new(Table::default()),
            limits,
            memo: Memo::default(),
        };
        // The empty multiset always gets the first id.
        store.intern_canonical(Vec::new());
        store
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Number of interned nodes. Never zero: the empty multiset is interned on creation.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.table.read().nodes.len()
    }

    /// The empty multiset.
    pub fn mempty(&self) -> MsetId {
        MsetId(0)
    }

    /// Interns the multiset whose elements are `children`, counted with repetition and in any
    /// order.
    pub fn mk_sup(&self, children: &[MsetId]) -> MsetId {
        self.mk_bag(children.iter().map(|&c| (c, 1)))
    }

    /// Interns a bag given as (child, multiplicity) pairs. Repeated keys are added together and
    /// zero multiplicities are dropped.
    pub fn mk_bag(&self, bag: impl IntoIterator<Item = (MsetId, Multiplicity)>) -> MsetId {
        let mut bag: Vec<_> = bag.into_iter().filter(|&(_, m)| m > 0).collect();
        bag.sort_unstable_by_key(|&(c, _)| c);
        let mut canonical: Vec<(MsetId, Multiplicity)> = Vec::with_capacity(bag.len());
        for (c, m) in bag {
            match canonical.last_mut() {
                Some((last, lm)) if *last == c => {
                    *lm = lm.checked_add(m).expect("multiplicity overflow");
                }
                _ => canonical.push((c, m)),
            }
        }
        self.intern_canonical(canonical)
    }

    fn intern_canonical(&self, bag: Vec<(MsetId, Multiplicity)>) -> MsetId {
        if let Some(&id) = self.table.read().index.get(bag.as_slice()) {
            return id;
        }
        let mut table = self.table.write();
        if let Some(&id) = table.index.get(bag.as_slice()) {
            return id;
        }
        let mut rank = 0;
        let mut width: Multiplicity = 0;
        let mut hereditary_width: Multiplicity = 0;
        let mut set_like = true;
        for &(c, m) in &bag {
            let child = table
                .nodes
                .get(c.index())
                .unwrap_or_else(|| panic!("{c} is not interned in this store"));
            rank = rank.max(child.rank + 1);
            width += m;
            hereditary_width = hereditary_width.max(child.hereditary_width);
            set_like &= m == 1 && child.set_like;
        }
        hereditary_width = hereditary_width.max(width);
        let id = MsetId(u32::try_from(table.nodes.len()).expect("intern table full"));
        let children: Arc<[(MsetId, Multiplicity)]> = bag.into();
        table.nodes.push(MNode {
            children: children.clone(),
            rank,
            width,
            hereditary_width,
            set_like,
        });
        table.index.insert(children, id);
        id
    }

    pub fn node(&self, x: MsetId) -> MNode {
        self.table.read().nodes[x.index()].clone()
    }

    /// The canonical bag of `x`.
    pub fn children_of(&self, x: MsetId) -> Arc<[(MsetId, Multiplicity)]> {
        self.table.read().nodes[x.index()].children.clone()
    }

    /// Multiplicity of `x` in `y`, zero when absent.
    pub fn count_in(&self, x: MsetId, y: MsetId) -> Multiplicity {
        let table = self.table.read();
        let children = &table.nodes[y.index()].children;
        children
            .binary_search_by_key(&x, |&(c, _)| c)
            .map_or(0, |i| children[i].1)
    }

    /// Extensional multiset equality. Interning makes this an id comparison.
    pub fn meq(&self, x: MsetId, y: MsetId) -> bool {
        x == y
    }

    pub fn rank(&self, x: MsetId) -> usize {
        self.table.read().nodes[x.index()].rank
    }

    /// All multisets of rank at most `rank_bound` whose every node has at most `width_bound`
    /// child occurrences. Bags are listed by size, then in combination order over the previous
    /// level, so the order is deterministic for a given store history.
    pub fn enumerate_msets(&self, rank_bound: usize, width_bound: usize) -> Result<Vec<MsetId>> {
        let cap = self.limits.max_elements;
        let mut level = vec![self.mempty()];
        for _ in 0..rank_bound {
            let n = level.len();
            let total = (0..=width_bound)
                .try_fold(0u128, |acc, k| acc.checked_add(multichoose(n, k)?))
                .filter(|&t| t <= cap as u128)
                .ok_or_else(|| Error::Resource {
                    what: "multiset enumeration",
                    needed: format!("bags of size <= {width_bound} over {n} elements"),
                    limit: cap,
                })?;
            let mut seen = HashSet::with_capacity(total as usize);
            let mut next = Vec::with_capacity(total as usize);
            for k in 0..=width_bound {
                for combo in level.iter().copied().combinations_with_replacement(k) {
                    let id = self.mk_sup(&combo);
                    if seen.insert(id) {
                        next.push(id);
                    }
                }
            }
            if next.len() == level.len() {
                break;
            }
            level = next;
        }
        Ok(level)
    }
}

/// Number of size-`k` bags over `n` kinds, `None` on overflow.
fn multichoose(n: usize, k: usize) -> Option<u128> {
    if k == 0 {
        return Some(1);
    }
    if n == 0 {
        return Some(0);
    }
    // C(n + k - 1, k), built incrementally so every intermediate value is an integer.
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc.checked_mul(n as u128 + i)? / (i + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sup_is_the_empty_multiset() {
        let s = Store::new();
        assert_eq!(s.mk_sup(&[]), s.mempty());
        assert!(s.children_of(s.mempty()).is_empty());
        assert_eq!(s.rank(s.mempty()), 0);
    }

    #[test]
    fn duplicates_are_kept_as_multiplicity() {
        let s = Store::new();
        let e = s.mempty();
        let ee = s.mk_sup(&[e, e]);
        assert_eq!(&*s.children_of(ee), &[(e, 2)]);
        assert_eq!(s.count_in(e, ee), 2);
        assert!(!s.meq(ee, s.mk_sup(&[e])));
    }

    #[test]
    fn count_in_after_canonicalization() {
        let s = Store::new();
        let e = s.mempty();
        let se = s.mk_sup(&[e]);
        let y = s.mk_sup(&[se, se, e]);
        assert_eq!(s.count_in(se, y), 2);
        assert_eq!(s.count_in(e, y), 1);
        assert_eq!(s.count_in(y, y), 0);
        for x in [e, se, y] {
            assert_eq!(s.count_in(x, e), 0);
        }
    }

    #[test]
    fn order_insensitive() {
        let s = Store::new();
        let e = s.mempty();
        let se = s.mk_sup(&[e]);
        assert_eq!(s.mk_sup(&[e, se]), s.mk_sup(&[se, e]));
        assert_eq!(
            s.mk_bag([(e, 1), (se, 2), (e, 1)]),
            s.mk_sup(&[se, e, se, e])
        );
        assert_eq!(s.mk_bag([(e, 0)]), e);
    }

    #[test]
    fn rank_and_width_facts() {
        let s = Store::new();
        let e = s.mempty();
        let se = s.mk_sup(&[e]);
        let x = s.mk_sup(&[se, e, e, e]);
        let n = s.node(x);
        assert_eq!(n.rank(), 2);
        assert_eq!(n.width(), 4);
        assert_eq!(n.hereditary_width(), 4);
        assert!(!n.is_set_like());
        assert!(s.node(se).is_set_like());
    }

    #[test]
    fn small_enumerations() {
        let s = Store::new();
        let e = s.mempty();
        assert_eq!(s.enumerate_msets(0, 5).unwrap(), vec![e]);
        let se = s.mk_sup(&[e]);
        let ee = s.mk_sup(&[e, e]);
        assert_eq!(s.enumerate_msets(1, 2).unwrap(), vec![e, se, ee]);
        assert_eq!(s.enumerate_msets(3, 0).unwrap(), vec![e]);
    }

    #[test]
    fn enumeration_respects_cap() {
        let s = Store::with_limits(Limits {
            max_elements: 50,
            ..Limits::default()
        });
        assert!(s.enumerate_msets(2, 2).is_ok());
        assert!(matches!(
            s.enumerate_msets(3, 3),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn multichoose_values() {
        assert_eq!(multichoose(3, 2), Some(6));
        assert_eq!(multichoose(0, 0), Some(1));
        assert_eq!(multichoose(0, 2), Some(0));
        assert_eq!(multichoose(10, 3), Some(220));
    }

    #[test]
    fn concurrent_interning_agrees() {
        let s = Store::new();
        let ids: Vec<Vec<MsetId>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..4)
                .map(|_| {
                    scope.spawn(|| {
                        let e = s.mempty();
                        let a = s.mk_sup(&[e]);
                        let b = s.mk_sup(&[a, e, e]);
                        let c = s.mk_sup(&[b, a]);
                        vec![a, b, c]
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(ids.windows(2).all(|w| w[0] == w[1]));
        assert_eq!(s.len(), 4);
    }
}
