//! Iterative sets: multisets in which every element occurs at most once, hereditarily.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::mset::{MsetId, Store};

/// A multiset certified to be an iterative set. Equality is equality of the underlying
/// multiset.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VsetId(MsetId);

impl VsetId {
    pub fn mset(self) -> MsetId {
        self.0
    }
}

impl fmt::Display for VsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<VsetId> for MsetId {
    fn from(v: VsetId) -> MsetId {
        v.0
    }
}

impl Store {
    /// True iff every node reachable from `x` has all multiplicities equal to 1.
    ///
    /// The answer is computed once when a node is interned, so this is a table lookup.
    pub fn is_itset(&self, x: MsetId) -> bool {
        self.node(x).is_set_like()
    }

    /// Certifies `x` as an iterative set. On failure the error carries the path from `x` down
    /// to the first node with a repeated element.
    pub fn to_vset(&self, x: MsetId) -> Result<VsetId> {
        if self.is_itset(x) {
            return Ok(VsetId(x));
        }
        let mut path = vec![self.show(x)];
        let mut cur = x;
        loop {
            let kids = self.display_children(cur);
            if let Some(&(rep, _)) = kids.iter().find(|&&(_, m)| m > 1) {
                return Err(Error::NotSetLike {
                    path,
                    repeated: self.show(rep),
                });
            }
            cur = kids
                .iter()
                .map(|&(c, _)| c)
                .find(|&c| !self.is_itset(c))
                .expect("a non-set node has a repeated child or a non-set child");
            path.push(self.show(cur));
        }
    }

    /// Parses a brace literal that must denote an iterative set.
    pub fn parse_vset(&self, text: &str) -> Result<VsetId> {
        let x = self.parse_literal(text)?;
        self.to_vset(x)
    }

    pub fn member(&self, x: VsetId, y: VsetId) -> bool {
        self.count_in(x.0, y.0) > 0
    }

    /// Elements of `y` in id order, each certified.
    pub fn elements(&self, y: VsetId) -> Vec<VsetId> {
        self.children_of(y.0)
            .iter()
            .map(|&(c, _)| VsetId(c))
            .collect()
    }

    /// The set whose elements are the distinct values among `inputs`.
    pub fn image(&self, inputs: impl IntoIterator<Item = VsetId>) -> VsetId {
        let distinct: BTreeSet<MsetId> = inputs.into_iter().map(|v| v.0).collect();
        let children: Vec<MsetId> = distinct.into_iter().collect();
        VsetId(self.mk_sup(&children))
    }

    /// Canonical literal of a set.
    pub fn show_set(&self, x: VsetId) -> String {
        self.show(x.0)
    }

    /// All iterative sets of rank at most `rank_bound`: level 0 is `[{}]` and level `n + 1`
    /// lists every subset of level `n`, indexed by bitmask.
    pub fn enumerate_vsets(&self, rank_bound: usize) -> Result<Vec<VsetId>> {
        let cap = self.limits().max_elements;
        let mut level = vec![VsetId(self.mempty())];
        for _ in 0..rank_bound {
            let n = level.len();
            let total = 1usize
                .checked_shl(n as u32)
                .filter(|&t| n < usize::BITS as usize && t <= cap)
                .ok_or_else(|| Error::Resource {
                    what: "set enumeration",
                    needed: format!("2^{n} subsets"),
                    limit: cap,
                })?;
            let mut next = Vec::with_capacity(total);
            let mut picked = Vec::with_capacity(n);
            for mask in 0..total {
                picked.clear();
                picked.extend(
                    level
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, v)| v.0),
                );
                next.push(VsetId(self.mk_sup(&picked)));
            }
            level = next;
        }
        Ok(level)
    }
}
