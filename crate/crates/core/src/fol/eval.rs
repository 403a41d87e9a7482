//! The two interpretations of formulas over a finite carrier.
//!
//! `sigma_count` reads each formula as a type and counts its inhabitants: `∃` is a sum over the
//! carrier, `∀` a product, `∨` a disjoint sum, `∧` a product, `φ → ψ` has `|ψ|^|φ|`
//! inhabitants and `x ∈ y` has as many as `x` has occurrences in `y`. `tau_eval` is the
//! truncated reading, where `∃` and `∨` only record inhabitation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::formula::Formula;
use crate::error::{Error, Result};
use crate::mset::{MsetId, Store};
use crate::vset::VsetId;

/// Number of inhabitants of the untruncated interpretation.
pub type SigmaCount = BigUint;

/// How `x ∈ y` is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    /// By multiplicity, as for multisets.
    Multiplicity,
    /// 0 or 1, as for sets.
    Boolean,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CarrierKind {
    Multisets,
    Sets,
    List,
}

/// The finite domain quantifiers range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Carrier {
    kind: CarrierKind,
    membership: Membership,
    elements: Vec<MsetId>,
}

impl Carrier {
    /// All iterative sets of rank at most `rank`.
    pub fn vsets(store: &Store, rank: usize) -> Result<Self> {
        let elements = store
            .enumerate_vsets(rank)?
            .into_iter()
            .map(VsetId::mset)
            .collect();
        Ok(Carrier {
            kind: CarrierKind::Sets,
            membership: Membership::Boolean,
            elements,
        })
    }

    /// All multisets of rank at most `rank` and hereditary width at most `width`.
    pub fn msets(store: &Store, rank: usize, width: usize) -> Result<Self> {
        Ok(Carrier {
            kind: CarrierKind::Multisets,
            membership: Membership::Multiplicity,
            elements: store.enumerate_msets(rank, width)?,
        })
    }

    /// An explicit list; repeated entries are dropped, first occurrence wins.
    pub fn list(elements: impl IntoIterator<Item = MsetId>, membership: Membership) -> Self {
        let mut out: Vec<MsetId> = Vec::new();
        for e in elements {
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Carrier {
            kind: CarrierKind::List,
            membership,
            elements: out,
        }
    }

    pub fn from_vsets(elements: impl IntoIterator<Item = VsetId>) -> Self {
        Self::list(elements.into_iter().map(VsetId::mset), Membership::Boolean)
    }

    pub fn kind(&self) -> CarrierKind {
        self.kind
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    pub fn elements(&self) -> &[MsetId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: MsetId) -> bool {
        self.elements.contains(&x)
    }
}

/// Assignment of carrier elements (or any interned multiset) to variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    map: BTreeMap<String, MsetId>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, value: impl Into<MsetId>) -> Self {
        self.bind(var, value);
        self
    }

    pub fn bind(&mut self, var: &str, value: impl Into<MsetId>) -> Option<MsetId> {
        self.map.insert(var.to_string(), value.into())
    }

    pub fn get(&self, var: &str) -> Option<MsetId> {
        self.map.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, MsetId)> {
        self.map.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

type HostPredicate = Arc<dyn Fn(&Store, &[MsetId]) -> bool + Send + Sync>;

/// Decidable host predicates bound to predicate symbols. Each application counts as 0 or 1.
#[derive(Clone, Default)]
pub struct Predicates {
    map: HashMap<String, (usize, HostPredicate)>,
}

impl fmt::Debug for Predicates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.map.iter().map(|(k, (a, _))| (k, a)).collect();
        names.sort();
        f.debug_struct("Predicates")
            .field("symbols", &names)
            .finish()
    }
}

impl Predicates {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(
        &mut self,
        name: &str,
        arity: usize,
        pred: impl Fn(&Store, &[MsetId]) -> bool + Send + Sync + 'static,
    ) -> &mut Self {
        self.map.insert(name.to_string(), (arity, Arc::new(pred)));
        self
    }

    fn apply(&self, store: &Store, name: &str, args: &[MsetId]) -> Result<bool> {
        let (arity, pred) = self
            .map
            .get(name)
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))?;
        if *arity != args.len() {
            return Err(Error::ArityMismatch {
                name: name.to_string(),
                expected: *arity,
                got: args.len(),
            });
        }
        Ok(pred(store, args))
    }
}

/// A finite structure: a store, a carrier and the predicate bindings.
pub struct Model<'a> {
    store: &'a Store,
    carrier: &'a Carrier,
    preds: Predicates,
}

/// Variable environment: innermost binding last.
struct Env(Vec<(String, MsetId)>);

impl Env {
    fn new(val: &Valuation) -> Self {
        Env(val.iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    fn lookup(&self, var: &str) -> Result<MsetId> {
        self.0
            .iter()
            .rev()
            .find(|(k, _)| k == var)
            .map(|&(_, v)| v)
            .ok_or_else(|| Error::UnboundVariable(var.to_string()))
    }
}

impl<'a> Model<'a> {
    pub fn new(store: &'a Store, carrier: &'a Carrier) -> Self {
        Model {
            store,
            carrier,
            preds: Predicates::new(),
        }
    }

    pub fn with_predicates(mut self, preds: Predicates) -> Self {
        self.preds = preds;
        self
    }

    pub fn store(&self) -> &'a Store {
        self.store
    }

    pub fn carrier(&self) -> &'a Carrier {
        self.carrier
    }

    fn occurrences(&self, x: MsetId, y: MsetId) -> u64 {
        let n = self.store.count_in(x, y);
        match self.carrier.membership {
            Membership::Multiplicity => n,
            Membership::Boolean => n.min(1),
        }
    }

    fn check_size(&self, n: SigmaCount) -> Result<SigmaCount> {
        let limit = self.store.limits().max_count_digits;
        // Cheap upper bound first; exact digit count only near the limit.
        if n.bits() as f64 * std::f64::consts::LOG10_2 > limit as f64 - 1.0
            && n.to_str_radix(10).len() > limit
        {
            return Err(Error::Resource {
                what: "sigma count",
                needed: format!(
                    "about {} digits",
                    (n.bits() as f64 * std::f64::consts::LOG10_2).ceil()
                ),
                limit,
            });
        }
        Ok(n)
    }

    fn power(&self, base: SigmaCount, exp: SigmaCount) -> Result<SigmaCount> {
        if exp.is_zero() || base.is_one() {
            return Ok(BigUint::one());
        }
        if base.is_zero() {
            return Ok(BigUint::zero());
        }
        let limit = self.store.limits().max_count_digits;
        let digits_per_factor = base.bits().saturating_sub(1) as f64 * std::f64::consts::LOG10_2;
        let too_big = || Error::Resource {
            what: "sigma count",
            needed: format!("{base}^{exp}"),
            limit,
        };
        let e = exp.to_u32().ok_or_else(too_big)?;
        if digits_per_factor * e as f64 > limit as f64 {
            return Err(too_big());
        }
        self.check_size(base.pow(e))
    }

    /// Number of inhabitants of the untruncated reading of `phi` under `val`.
    pub fn sigma_count(&self, phi: &Formula, val: &Valuation) -> Result<SigmaCount> {
        self.check_scope(phi, val)?;
        self.sigma(phi, &mut Env::new(val))
    }

    /// Rejects unbound variables and unknown or misapplied predicate symbols up front, so the
    /// evaluators may short-circuit without hiding such errors.
    pub fn check_scope(&self, phi: &Formula, val: &Valuation) -> Result<()> {
        if let Some(v) = phi.free_vars().into_iter().find(|v| val.get(v).is_none()) {
            return Err(Error::UnboundVariable(v));
        }
        for (name, got) in phi.predicates() {
            match self.preds.map.get(&name) {
                None => return Err(Error::UnknownPredicate(name)),
                Some(&(expected, _)) if expected != got => {
                    return Err(Error::ArityMismatch {
                        name,
                        expected,
                        got,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn sigma(&self, phi: &Formula, env: &mut Env) -> Result<SigmaCount> {
        Ok(match phi {
            Formula::Bot => BigUint::zero(),
            Formula::Top => BigUint::one(),
            Formula::Mem(x, y) => BigUint::from(self.occurrences(env.lookup(x)?, env.lookup(y)?)),
            Formula::Eq(x, y) => BigUint::from(u8::from(env.lookup(x)? == env.lookup(y)?)),
            Formula::Pred(name, args) => BigUint::from(u8::from(self.pred(name, args, env)?)),
            Formula::And(p, q) => {
                let a = self.sigma(p, env)?;
                if a.is_zero() {
                    return Ok(a);
                }
                self.check_size(a * self.sigma(q, env)?)?
            }
            Formula::Or(p, q) => self.check_size(self.sigma(p, env)? + self.sigma(q, env)?)?,
            Formula::Imp(p, q) => {
                let a = self.sigma(p, env)?;
                if a.is_zero() {
                    return Ok(BigUint::one());
                }
                let b = self.sigma(q, env)?;
                self.power(b, a)?
            }
            Formula::Forall(x, body) => {
                let mut acc = BigUint::one();
                for &a in &self.carrier.elements {
                    env.0.push((x.clone(), a));
                    let r = self.sigma(body, env);
                    env.0.pop();
                    acc *= r?;
                    acc = self.check_size(acc)?;
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Formula::Exists(x, body) => {
                let mut acc = BigUint::zero();
                for &a in &self.carrier.elements {
                    env.0.push((x.clone(), a));
                    let r = self.sigma(body, env);
                    env.0.pop();
                    acc += r?;
                }
                self.check_size(acc)?
            }
        })
    }

    fn pred(&self, name: &str, args: &[String], env: &Env) -> Result<bool> {
        let vals = args
            .iter()
            .map(|a| env.lookup(a))
            .collect::<Result<Vec<_>>>()?;
        self.preds.apply(self.store, name, &vals)
    }

    /// Truth value of the truncated reading of `phi` under `val`.
    pub fn tau_eval(&self, phi: &Formula, val: &Valuation) -> Result<bool> {
        self.check_scope(phi, val)?;
        self.tau(phi, &mut Env::new(val))
    }

    fn tau(&self, phi: &Formula, env: &mut Env) -> Result<bool> {
        Ok(match phi {
            Formula::Bot => false,
            Formula::Top => true,
            Formula::Mem(x, y) => self.store.count_in(env.lookup(x)?, env.lookup(y)?) > 0,
            Formula::Eq(x, y) => env.lookup(x)? == env.lookup(y)?,
            Formula::Pred(name, args) => self.pred(name, args, env)?,
            Formula::And(p, q) => self.tau(p, env)? && self.tau(q, env)?,
            Formula::Or(p, q) => self.tau(p, env)? || self.tau(q, env)?,
            Formula::Imp(p, q) => !self.tau(p, env)? || self.tau(q, env)?,
            Formula::Forall(x, body) => self.quantify(x, body, env, true)?,
            Formula::Exists(x, body) => self.quantify(x, body, env, false)?,
        })
    }

    fn quantify(&self, x: &str, body: &Formula, env: &mut Env, universal: bool) -> Result<bool> {
        for &a in &self.carrier.elements {
            env.0.push((x.to_string(), a));
            let r = self.tau(body, env);
            env.0.pop();
            if r? != universal {
                return Ok(!universal);
            }
        }
        Ok(universal)
    }

    /// For `phi = ∃x ψ`: every carrier element `a` with a nonzero count for `ψ[x := a]`,
    /// together with that count. `None` if `phi` is not existential.
    pub fn sigma_witnesses(
        &self,
        phi: &Formula,
        val: &Valuation,
    ) -> Result<Option<Vec<(MsetId, SigmaCount)>>> {
        let Formula::Exists(x, body) = phi else {
            return Ok(None);
        };
        self.check_scope(phi, val)?;
        let mut env = Env::new(val);
        let mut out = Vec::new();
        for &a in &self.carrier.elements {
            env.0.push((x.clone(), a));
            let r = self.sigma(body, &mut env);
            env.0.pop();
            let n = r?;
            if !n.is_zero() {
                out.push((a, n));
            }
        }
        Ok(Some(out))
    }
}
