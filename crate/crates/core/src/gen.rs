//! Seeded random generators for formulas, literals and carriers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::fol::eval::{Carrier, Membership};
use crate::fol::formula::{self, Formula};
use crate::mset::{MsetId, Store};

/// Shape of generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub max_depth: usize,
    /// Variables that may occur free.
    pub free: Vec<String>,
    /// Predicate symbols with arities.
    pub predicates: Vec<(String, usize)>,
    /// Depth bound for implication antecedents, which keeps counts of nested implications
    /// within a manageable number of digits.
    pub antecedent_depth: usize,
    /// Draw bound-variable names from a wide pool, including primes and underscores, instead
    /// of fresh `v0, v1, ...`.
    pub exotic_names: bool,
}

impl FormulaShape {
    pub fn new(max_depth: usize, free: &[&str]) -> Self {
        FormulaShape {
            max_depth,
            free: free.iter().map(|s| s.to_string()).collect(),
            predicates: Vec::new(),
            antecedent_depth: max_depth,
            exotic_names: false,
        }
    }
}

const NAME_POOL: [&str; 10] = ["x", "y", "z", "w", "a1", "b_2", "u'", "v''", "_t", "Set"];

/// A well-scoped random formula: every free variable is in `shape.free`.
pub fn random_formula(rng: &mut impl Rng, shape: &FormulaShape) -> Formula {
    let mut scope = shape.free.clone();
    let mut fresh = 0;
    gen(rng, shape, shape.max_depth, &mut scope, &mut fresh)
}

fn gen(
    rng: &mut impl Rng,
    shape: &FormulaShape,
    depth: usize,
    scope: &mut Vec<String>,
    fresh: &mut usize,
) -> Formula {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return atom(rng, shape, scope);
    }
    match rng.gen_range(0..5) {
        0 => {
            let p = gen(rng, shape, depth - 1, scope, fresh);
            formula::and(p, gen(rng, shape, depth - 1, scope, fresh))
        }
        1 => {
            let p = gen(rng, shape, depth - 1, scope, fresh);
            formula::or(p, gen(rng, shape, depth - 1, scope, fresh))
        }
        2 => {
            let d = (depth - 1).min(shape.antecedent_depth);
            let p = gen(rng, shape, d, scope, fresh);
            formula::imp(p, gen(rng, shape, depth - 1, scope, fresh))
        }
        q => {
            let x = binder(rng, shape, scope, fresh);
            scope.push(x.clone());
            let body = gen(rng, shape, depth - 1, scope, fresh);
            scope.pop();
            if q == 3 {
                formula::forall(&x, body)
            } else {
                formula::exists(&x, body)
            }
        }
    }
}

fn binder(rng: &mut impl Rng, shape: &FormulaShape, scope: &[String], fresh: &mut usize) -> String {
    if shape.exotic_names {
        return NAME_POOL.choose(rng).unwrap().to_string();
    }
    // Occasionally shadow a variable already in scope.
    if !scope.is_empty() && rng.gen_ratio(1, 6) {
        return scope.choose(rng).unwrap().clone();
    }
    *fresh += 1;
    format!("v{}", *fresh - 1)
}

fn atom(rng: &mut impl Rng, shape: &FormulaShape, scope: &[String]) -> Formula {
    let var = |rng: &mut _| scope.choose(rng).unwrap().clone();
    if scope.is_empty() {
        return if rng.gen() {
            Formula::Top
        } else {
            Formula::Bot
        };
    }
    match rng.gen_range(0..8) {
        0 => Formula::Bot,
        1 => Formula::Top,
        2..=4 => Formula::Mem(var(rng), var(rng)),
        5 | 6 => Formula::Eq(var(rng), var(rng)),
        _ => match shape.predicates.choose(rng) {
            Some((name, arity)) => {
                Formula::Pred(name.clone(), (0..*arity).map(|_| var(rng)).collect())
            }
            None => Formula::Mem(var(rng), var(rng)),
        },
    }
}

/// A random multiset of rank at most `rank` with at most `width` children per node.
pub fn random_mset(rng: &mut impl Rng, store: &Store, rank: usize, width: usize) -> MsetId {
    if rank == 0 {
        return store.mempty();
    }
    let n = rng.gen_range(0..=width);
    let children: Vec<MsetId> = (0..n)
        .map(|_| random_mset(rng, store, rank - 1, width))
        .collect();
    store.mk_sup(&children)
}

/// A random literal text in arbitrary child order, with optional spaces.
pub fn random_literal_text(rng: &mut impl Rng, rank: usize, width: usize) -> String {
    let n = if rank == 0 {
        0
    } else {
        rng.gen_range(0..=width)
    };
    let parts: Vec<String> = (0..n)
        .map(|_| random_literal_text(rng, rank - 1, width))
        .collect();
    let sep = if rng.gen_ratio(1, 3) { ", " } else { "," };
    format!("{{{}}}", parts.join(sep))
}

/// A carrier of `size` distinct elements drawn from `pool`, in pool order.
pub fn random_carrier(
    rng: &mut impl Rng,
    pool: &[MsetId],
    size: usize,
    membership: Membership,
) -> Carrier {
    let mut picked: Vec<usize> =
        rand::seq::index::sample(rng, pool.len(), size.min(pool.len())).into_vec();
    picked.sort_unstable();
    Carrier::list(picked.into_iter().map(|i| pool[i]), membership)
}
