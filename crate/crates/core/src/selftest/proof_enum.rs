//! Brute-force enumeration of the proof terms of the untruncated interpretation.
//!
//! Every inhabitant is built as an explicit term, so the number of terms can be compared with
//! the arithmetic count without sharing any code with it. Membership is counted by scanning
//! child lists rather than through the store's lookup.

use std::collections::HashSet;

use crate::fol::eval::Membership;
use crate::fol::formula::Formula;
use crate::mset::{MsetId, Store};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Proof {
    Unit,
    /// The `i`-th occurrence of an element in a bag.
    Occurrence(u64),
    Refl,
    /// A host predicate that holds.
    Holds,
    Pair(Box<Proof>, Box<Proof>),
    Inl(Box<Proof>),
    Inr(Box<Proof>),
    /// A function from the antecedent proofs, listed in enumeration order, to consequent proofs.
    Table(Vec<Proof>),
    /// Existential introduction with an explicit witness.
    Intro(MsetId, Box<Proof>),
    /// One proof per carrier element, in carrier order.
    Family(Vec<Proof>),
}

pub type HostPredicate<'a> = &'a dyn Fn(&Store, &str, &[MsetId]) -> bool;

pub struct ProofEnumerator<'a> {
    pub store: &'a Store,
    pub carrier: &'a [MsetId],
    pub membership: Membership,
    pub predicate: HostPredicate<'a>,
    /// Largest number of proofs materialized for any subformula.
    pub budget: usize,
}

impl ProofEnumerator<'_> {
    /// All proofs of `phi` under `env`, or `None` if some subformula exceeds the budget.
    pub fn proofs(&self, phi: &Formula, env: &mut Vec<(String, MsetId)>) -> Option<Vec<Proof>> {
        let lookup = |env: &Vec<(String, MsetId)>, v: &str| {
            env.iter()
                .rev()
                .find(|(k, _)| k == v)
                .map(|&(_, m)| m)
                .expect("well-scoped formula")
        };
        let out = match phi {
            Formula::Bot => Vec::new(),
            Formula::Top => vec![Proof::Unit],
            Formula::Mem(x, y) => {
                let (x, y) = (lookup(env, x), lookup(env, y));
                let mut n: u64 = self
                    .store
                    .children_of(y)
                    .iter()
                    .filter(|(c, _)| *c == x)
                    .map(|&(_, m)| m)
                    .sum();
                if self.membership == Membership::Boolean {
                    n = n.min(1);
                }
                (0..n).map(Proof::Occurrence).collect()
            }
            Formula::Eq(x, y) => {
                if lookup(env, x) == lookup(env, y) {
                    vec![Proof::Refl]
                } else {
                    Vec::new()
                }
            }
            Formula::Pred(name, args) => {
                let args: Vec<MsetId> = args.iter().map(|a| lookup(env, a)).collect();
                if (self.predicate)(self.store, name, &args) {
                    vec![Proof::Holds]
                } else {
                    Vec::new()
                }
            }
            Formula::And(p, q) => {
                let ps = self.proofs(p, env)?;
                let qs = self.proofs(q, env)?;
                if ps.len().checked_mul(qs.len())? > self.budget {
                    return None;
                }
                let mut out = Vec::new();
                for a in &ps {
                    for b in &qs {
                        out.push(Proof::Pair(Box::new(a.clone()), Box::new(b.clone())));
                    }
                }
                out
            }
            Formula::Or(p, q) => {
                let ps = self.proofs(p, env)?;
                let qs = self.proofs(q, env)?;
                ps.into_iter()
                    .map(|a| Proof::Inl(Box::new(a)))
                    .chain(qs.into_iter().map(|b| Proof::Inr(Box::new(b))))
                    .collect()
            }
            Formula::Imp(p, q) => {
                let ps = self.proofs(p, env)?;
                let qs = self.proofs(q, env)?;
                self.tables(ps.len(), &qs)?
                    .into_iter()
                    .map(Proof::Table)
                    .collect()
            }
            Formula::Exists(x, body) => {
                let mut out = Vec::new();
                for &a in self.carrier {
                    env.push((x.clone(), a));
                    let ps = self.proofs(body, env);
                    env.pop();
                    out.extend(ps?.into_iter().map(|p| Proof::Intro(a, Box::new(p))));
                }
                out
            }
            Formula::Forall(x, body) => {
                let mut per_element = Vec::new();
                for &a in self.carrier {
                    env.push((x.clone(), a));
                    let ps = self.proofs(body, env);
                    env.pop();
                    per_element.push(ps?);
                }
                let sizes: Vec<usize> = per_element.iter().map(Vec::len).collect();
                self.product(&sizes)?
                    .into_iter()
                    .map(|pick| {
                        Proof::Family(
                            pick.iter()
                                .zip(&per_element)
                                .map(|(&i, ps)| ps[i].clone())
                                .collect(),
                        )
                    })
                    .collect()
            }
        };
        (out.len() <= self.budget).then_some(out)
    }

    /// Every table assigning one of `codomain` to each of `n` inputs.
    fn tables(&self, n: usize, codomain: &[Proof]) -> Option<Vec<Vec<Proof>>> {
        let picks = self.product(&vec![codomain.len(); n])?;
        Some(
            picks
                .into_iter()
                .map(|pick| pick.into_iter().map(|i| codomain[i].clone()).collect())
                .collect(),
        )
    }

    /// All index tuples `t` with `t[i] < sizes[i]`, lexicographically.
    fn product(&self, sizes: &[usize]) -> Option<Vec<Vec<usize>>> {
        let mut total: usize = 1;
        for &s in sizes {
            total = total.checked_mul(s)?;
            if total > self.budget {
                return None;
            }
        }
        let mut out = Vec::with_capacity(total);
        if total == 0 {
            return Some(out);
        }
        let mut cur = vec![0; sizes.len()];
        loop {
            out.push(cur.clone());
            let mut i = sizes.len();
            loop {
                if i == 0 {
                    return Some(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < sizes[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// True when no two proofs in the list coincide.
pub fn all_distinct(proofs: &[Proof]) -> bool {
    let mut seen = HashSet::with_capacity(proofs.len());
    proofs.iter().all(|p| seen.insert(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_formula;

    fn count(store: &Store, carrier: &[MsetId], text: &str, env: &[(&str, MsetId)]) -> usize {
        let e = ProofEnumerator {
            store,
            carrier,
            membership: Membership::Multiplicity,
            predicate: &|_, _, _| false,
            budget: 10_000,
        };
        let mut env: Vec<(String, MsetId)> = env.iter().map(|&(k, v)| (k.into(), v)).collect();
        let ps = e.proofs(&parse_formula(text).unwrap(), &mut env).unwrap();
        assert!(all_distinct(&ps));
        ps.len()
    }

    #[test]
    fn small_counts() {
        let s = Store::new();
        let e = s.mempty();
        let ee = s.mk_sup(&[e, e]);
        let carrier = [e, ee];
        assert_eq!(count(&s, &carrier, "top", &[]), 1);
        assert_eq!(count(&s, &carrier, "exists y. y in x", &[("x", ee)]), 2);
        assert_eq!(count(&s, &carrier, "top \\/ top", &[]), 2);
        // |{0,1,2}|^|{0,1}|: two occurrences of e in ee on each side
        assert_eq!(
            count(
                &s,
                &carrier,
                "y in x -> y in x \\/ top",
                &[("x", ee), ("y", e)]
            ),
            9
        );
        assert_eq!(count(&s, &carrier, "bot -> bot", &[]), 1);
        assert_eq!(count(&s, &carrier, "forall y. top \\/ top", &[]), 4);
    }
}
