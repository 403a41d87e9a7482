//! The acceptance suite: each criterion is an exhaustive or seeded check over small fragments,
//! runnable from the library, the test harness and the `selftest` subcommand.

pub mod proof_enum;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::fol::axioms::{check_axiom, Axiom, Mode};
use crate::fol::eval::{Carrier, Membership, Model, Predicates, Valuation};
use crate::fol::formula::Formula;
use crate::fol::parse_formula;
use crate::gen::{self, FormulaShape};
use crate::mset::{Limits, MsetId, Store};
use crate::ops::{SearchSpace, WitnessMap};
use crate::vset::VsetId;
use proof_enum::{all_distinct, ProofEnumerator};

/// `Ok` carries a one-line summary of what was checked, `Err` the first counterexample.
pub type Verdict = std::result::Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub title: &'static str,
    check: fn() -> Verdict,
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `PASS [ 1] counts: ...` without timing, so reports are reproducible.
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion {
        id: 1,
        name: "counts",
        title: "hierarchy counts",
        check: counts,
    },
    Criterion {
        id: 2,
        name: "extensionality",
        title: "set extensionality",
        check: extensionality,
    },
    Criterion {
        id: 3,
        name: "mset-extensionality",
        title: "multiset extensionality",
        check: mset_extensionality,
    },
    Criterion {
        id: 4,
        name: "quotient",
        title: "quotient equivalence",
        check: quotient,
    },
    Criterion {
        id: 5,
        name: "exponentials",
        title: "exponentials",
        check: exponentials,
    },
    Criterion {
        id: 6,
        name: "constructions",
        title: "construction contracts",
        check: constructions,
    },
    Criterion {
        id: 7,
        name: "truncation",
        title: "truncation consistency",
        check: truncation,
    },
    Criterion {
        id: 8,
        name: "divergence",
        title: "sigma/tau divergence",
        check: divergence,
    },
    Criterion {
        id: 9,
        name: "choice",
        title: "choice",
        check: choice,
    },
    Criterion {
        id: 10,
        name: "collection",
        title: "collection",
        check: collection,
    },
    Criterion {
        id: 11,
        name: "eps-induction",
        title: "epsilon-induction",
        check: eps_induction,
    },
    Criterion {
        id: 12,
        name: "kuratowski",
        title: "Kuratowski injectivity",
        check: kuratowski,
    },
    Criterion {
        id: 13,
        name: "round-trips",
        title: "determinism and round-trips",
        check: round_trips,
    },
];

/// Looks a criterion up by name or number.
pub fn find(key: &str) -> Option<&'static Criterion> {
    CRITERIA
        .iter()
        .find(|c| c.name == key || c.id.to_string() == key)
}

pub fn run_criterion(c: &Criterion) -> CriterionResult {
    let start = Instant::now();
    let verdict = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    let (passed, detail) = match verdict {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult {
        id: c.id,
        name: c.name,
        title: c.title,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(run_criterion).collect()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

trait OrFail<T> {
    fn or_fail(self, what: &str) -> std::result::Result<T, String>;
}

impl<T> OrFail<T> for crate::error::Result<T> {
    fn or_fail(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e: Error| format!("{what}: {e}"))
    }
}

/// All subsets of `pool` with at most `k` elements, smallest first.
fn small_subsets(pool: &[VsetId], k: usize) -> Vec<Vec<VsetId>> {
    let mut out = Vec::new();
    for n in 0..=k.min(pool.len()) {
        out.extend(itertools::Itertools::combinations(pool.iter().copied(), n));
    }
    out
}

/// Every map from `dom` into `cod`, as value lists aligned with `dom`.
fn all_maps<T: Copy>(dom_len: usize, cod: &[T]) -> Vec<Vec<T>> {
    (0..dom_len).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|m| {
                cod.iter().map(move |&y| {
                    let mut m = m.clone();
                    m.push(y);
                    m
                })
            })
            .collect()
    })
}

fn counts() -> Verdict {
    let s = Store::new();
    let expected = [1usize, 2, 4, 16, 65536];
    let mut prev: Option<Vec<VsetId>> = None;
    for (n, &want) in expected.iter().enumerate() {
        let level = s.enumerate_vsets(n).or_fail("enumerate")?;
        ensure!(
            level.len() == want,
            "V<={n} has {} elements, expected {want}",
            level.len()
        );
        let distinct: BTreeSet<VsetId> = level.iter().copied().collect();
        ensure!(
            distinct.len() == level.len(),
            "V<={n} has repeated elements"
        );
        match &prev {
            None => ensure!(level == vec![s.empty()], "V<=0 is not {{{{}}}}"),
            Some(p) => {
                // distinct subsets of the previous level, 2^|prev| of them: the whole powerset
                let pset: BTreeSet<VsetId> = p.iter().copied().collect();
                for &x in &level {
                    ensure!(
                        s.elements(x).iter().all(|e| pset.contains(e)),
                        "{} in V<={n} is not a subset of V<={}",
                        s.show_set(x),
                        n - 1
                    );
                }
                ensure!(
                    level.len() == 1usize << p.len(),
                    "V<={n} is not the powerset of V<={}",
                    n - 1
                );
            }
        }
        prev = Some(level);
    }
    Ok("|V<=n| = 1, 2, 4, 16, 65536 for n = 0..4, each level the powerset of the last".into())
}

fn extensionality() -> Verdict {
    let s = Store::new();
    let v3 = s.enumerate_vsets(3).or_fail("enumerate")?;
    let mut pairs = 0;
    for &x in &v3 {
        for &y in &v3 {
            let same_members = v3.iter().all(|&z| s.member(z, x) == s.member(z, y));
            let listed: BTreeSet<_> = s.elements(x).into_iter().collect();
            let listed_y: BTreeSet<_> = s.elements(y).into_iter().collect();
            ensure!(
                same_members == (listed == listed_y),
                "member listing disagrees"
            );
            ensure!(
                (x == y) == same_members,
                "{} and {}: equal ids {} but same members {}",
                s.show_set(x),
                s.show_set(y),
                x == y,
                same_members
            );
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs in V<=3: equal iff same members"))
}

/// A multiset as a plain tree with sorted children, independent of interning.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Tree(Vec<Tree>);

fn tree(s: &Store, x: MsetId) -> Tree {
    let mut kids = Vec::new();
    for &(c, m) in s.children_of(x).iter() {
        let t = tree(s, c);
        for _ in 0..m {
            kids.push(t.clone());
        }
    }
    kids.sort();
    Tree(kids)
}

fn mset_extensionality() -> Verdict {
    let s = Store::new();
    let frag = s.enumerate_msets(2, 2).or_fail("enumerate")?;
    let mut zs: BTreeSet<MsetId> = frag.iter().copied().collect();
    for &x in &frag {
        zs.extend(s.children_of(x).iter().map(|&(c, _)| c));
    }
    let trees: BTreeMap<MsetId, Tree> = zs.iter().map(|&z| (z, tree(&s, z))).collect();
    let mult = |z: MsetId, y: MsetId| trees[&y].0.iter().filter(|t| **t == trees[&z]).count();
    let mut pairs = 0;
    for &x in &frag {
        for &y in &frag {
            let pointwise = zs.iter().all(|&z| mult(z, x) == mult(z, y));
            for &z in &zs {
                ensure!(
                    s.count_in(z, x) as usize == mult(z, x),
                    "count_in disagrees with the tree oracle"
                );
            }
            ensure!(
                s.meq(x, y) == pointwise,
                "{} vs {}: meq {} but pointwise agreement {}",
                s.show(x),
                s.show(y),
                s.meq(x, y),
                pointwise
            );
            ensure!(
                s.meq(x, y) == (trees[&x] == trees[&y]),
                "meq disagrees with tree equality"
            );
            pairs += 1;
        }
    }
    Ok(format!(
        "{pairs} pairs in M(2,2) ({} elements), z over {} candidates",
        frag.len(),
        zs.len()
    ))
}

fn quotient() -> Verdict {
    let s = Store::new();
    let frag = s.enumerate_msets(2, 2).or_fail("enumerate")?;
    let q = s.quotient(&frag);
    let reps: BTreeSet<VsetId> = q.representatives.iter().copied().collect();
    ensure!(
        reps.len() == q.classes.len(),
        "representative map is not injective on classes"
    );
    let images: BTreeSet<VsetId> = frag.iter().map(|&x| s.iterative_image(x)).collect();
    ensure!(
        images == reps,
        "classes are not in bijection with the iterative images"
    );
    let members: usize = q.classes.iter().map(Vec::len).sum();
    ensure!(
        members == frag.len(),
        "classes do not partition the fragment"
    );
    for (class, &rep) in q.classes.iter().zip(&q.representatives) {
        for &x in class {
            ensure!(
                s.iterative_image(x) == rep,
                "{} maps outside its class",
                s.show(x)
            );
        }
    }
    for (i, a) in q.classes.iter().enumerate() {
        for b in &q.classes[i + 1..] {
            ensure!(!s.bisim(a[0], b[0]), "two classes are bisimilar");
        }
    }
    for &x in &frag {
        let img = s.iterative_image(x);
        ensure!(
            s.bisim(x, img.mset()),
            "{} is not bisimilar to its image",
            s.show(x)
        );
        ensure!(
            s.is_itset(img.mset()),
            "image of {} is not a set",
            s.show(x)
        );
    }
    let certified: Vec<MsetId> = frag.iter().copied().filter(|&x| s.is_itset(x)).collect();
    for &x in &certified {
        for &y in &certified {
            ensure!(
                s.bisim(x, y) == s.meq(x, y),
                "bisim and equality disagree on sets {} and {}",
                s.show(x),
                s.show(y)
            );
        }
    }
    Ok(format!(
        "M(2,2): {} elements, {} classes, {} certified",
        frag.len(),
        q.classes.len(),
        certified.len()
    ))
}

fn exponentials() -> Verdict {
    let s = Store::new();
    let v2 = s.enumerate_vsets(2).or_fail("enumerate")?;
    let v3 = s.enumerate_vsets(3).or_fail("enumerate")?;
    let subsets = small_subsets(&v2, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut graphs, mut non_graphs) = (0usize, 0usize);
    for a_el in &subsets {
        let a = s.image(a_el.iter().copied());
        for b_el in &subsets {
            let b = s.image(b_el.iter().copied());
            let e = s.exp(a, b).or_fail("exp")?;
            let want = b_el.len().pow(a_el.len() as u32);
            ensure!(
                s.elements(e).len() == want,
                "|exp({}, {})| = {}, expected {want}",
                s.show_set(a),
                s.show_set(b),
                s.elements(e).len()
            );
            let product: Vec<VsetId> = a_el
                .iter()
                .flat_map(|&x| b_el.iter().map(move |&y| (x, y)))
                .map(|(x, y)| s.ordered_pair(x, y))
                .collect();
            let product_set: BTreeSet<VsetId> = product.iter().copied().collect();
            for mask in 0u32..(1 << product.len()) {
                let rel = s.image(
                    (0..product.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| product[i]),
                );
                ensure!(
                    s.member(rel, e) == s.is_fun(a, b, rel),
                    "membership and is_fun disagree on {}",
                    s.show_set(rel)
                );
                graphs += 1;
            }
            let mut made = 0;
            while made < 100 {
                let n = rng.gen_range(1..=4);
                let parts: Vec<VsetId> = (0..n)
                    .map(|_| match rng.gen_range(0..3) {
                        0 => v3[rng.gen_range(0..v3.len())],
                        _ => s.ordered_pair(v2[rng.gen_range(0..4)], v2[rng.gen_range(0..4)]),
                    })
                    .collect();
                if parts.iter().all(|p| product_set.contains(p)) {
                    continue;
                }
                let c = s.image(parts);
                ensure!(
                    !s.member(c, e),
                    "non-graph {} is in the exponential",
                    s.show_set(c)
                );
                ensure!(
                    !s.is_fun(a, b, c),
                    "non-graph {} passes is_fun",
                    s.show_set(c)
                );
                made += 1;
                non_graphs += 1;
            }
        }
    }
    Ok(format!(
        "{} pairs (a, b): sizes |b|^|a|, {graphs} relations and {non_graphs} non-graphs classified",
        subsets.len() * subsets.len()
    ))
}

fn separation_samples() -> Vec<(&'static str, Formula)> {
    [
        ("empty", "forall w in z. bot"),
        ("inhabited", "exists w in z. top"),
        ("has-empty-member", "exists w in z. forall v in w. bot"),
    ]
    .into_iter()
    .map(|(n, t)| (n, parse_formula(t).expect("sample formula")))
    .collect()
}

fn constructions() -> Verdict {
    let s = Store::new();
    let v3 = s.enumerate_vsets(3).or_fail("enumerate")?;
    let carrier = Carrier::vsets(&s, 3).or_fail("carrier")?;
    let model = Model::new(&s, &carrier);
    let mut checks = 0usize;
    for &x in &v3 {
        for &y in &v3 {
            let p = s.pair_set(x, y);
            for &z in &v3 {
                ensure!(
                    s.member(z, p) == (z == x || z == y),
                    "pairing fails at x={}, y={}, z={}",
                    s.show_set(x),
                    s.show_set(y),
                    s.show_set(z)
                );
                checks += 1;
            }
            ensure!(s.elements(p).len() <= 2, "pair has extra elements");
        }
        let u = s.union(x);
        for &z in &v3 {
            let expected = s.elements(x).iter().any(|&w| s.member(z, w));
            ensure!(
                s.member(z, u) == expected,
                "union fails at x={}, z={}",
                s.show_set(x),
                s.show_set(z)
            );
            checks += 1;
        }
        ensure!(
            s.elements(u).iter().all(|e| v3.contains(e)),
            "union of {} leaves V<=3",
            s.show_set(x)
        );
        for (name, phi) in separation_samples() {
            let holds = |z: VsetId| {
                model
                    .tau_eval(&phi, &Valuation::new().with("z", z))
                    .expect("closed sample")
            };
            let sep = s.separation(x, holds);
            for &z in &v3 {
                ensure!(
                    s.member(z, sep) == (s.member(z, x) && holds(z)),
                    "separation [{name}] fails at x={}, z={}",
                    s.show_set(x),
                    s.show_set(z)
                );
                checks += 1;
            }
        }
    }
    for axiom in [Axiom::Pairing, Axiom::Union, Axiom::RestrictedSeparation] {
        for mode in [Mode::Tau, Mode::Sigma] {
            let r = check_axiom(&s, axiom, &carrier, mode).or_fail("check")?;
            ensure!(r.all_instances_hold(), "{axiom} instance fails in {mode}");
        }
    }
    Ok(format!(
        "{checks} pointwise biimplications over V<=3, plus axiom instances in both modes"
    ))
}

fn host_predicates() -> Predicates {
    let mut p = Predicates::new();
    p.bind("E", 1, |s, a| a[0] == s.mempty());
    p.bind("S", 2, |s, a| s.bisim(a[0], a[1]));
    p
}

fn host_predicate(s: &Store, name: &str, args: &[MsetId]) -> bool {
    match name {
        "E" => s.children_of(args[0]).is_empty(),
        "S" => s.iterative_image(args[0]) == s.iterative_image(args[1]),
        _ => unreachable!("generated formulas use only E and S"),
    }
}

fn truncation() -> Verdict {
    let s = Store::with_limits(Limits {
        max_count_digits: 100_000,
        ..Limits::default()
    });
    let msets = s.enumerate_msets(2, 2).or_fail("enumerate")?;
    let sets: Vec<MsetId> = s
        .enumerate_vsets(2)
        .or_fail("enumerate")?
        .into_iter()
        .map(VsetId::mset)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draw = |rng: &mut ChaCha8Rng, max_size: usize| {
        let (pool, membership) = if rng.gen() {
            (&msets, Membership::Multiplicity)
        } else {
            (&sets, Membership::Boolean)
        };
        let size = rng.gen_range(1..=max_size);
        gen::random_carrier(rng, pool, size, membership)
    };
    let bind = |rng: &mut ChaCha8Rng, c: &Carrier| {
        Valuation::new()
            .with("x", c.elements()[rng.gen_range(0..c.len())])
            .with("y", c.elements()[rng.gen_range(0..c.len())])
    };
    let mut shape = FormulaShape::new(4, &["x", "y"]);
    shape.predicates = vec![("E".into(), 1), ("S".into(), 2)];
    shape.antecedent_depth = 1;
    let (mut inhabited, mut largest) = (0, BigUint::from(0u8));
    for i in 0..1000 {
        let carrier = draw(&mut rng, 4);
        let val = bind(&mut rng, &carrier);
        let phi = gen::random_formula(&mut rng, &shape);
        let model = Model::new(&s, &carrier).with_predicates(host_predicates());
        let count = model
            .sigma_count(&phi, &val)
            .or_fail(&format!("formula {i}"))?;
        let truth = model
            .tau_eval(&phi, &val)
            .or_fail(&format!("formula {i}"))?;
        ensure!(
            truth == (count > BigUint::from(0u8)),
            "formula {i} `{phi}`: tau {truth} but sigma count {count}"
        );
        inhabited += usize::from(truth);
        largest = largest.max(count);
    }
    let mut shape = FormulaShape::new(3, &["x", "y"]);
    shape.predicates = vec![("E".into(), 1), ("S".into(), 2)];
    let (mut validated, mut skipped) = (0, 0);
    while validated < 100 {
        ensure!(
            skipped < 10_000,
            "proof enumerator skipped too many formulas"
        );
        let carrier = draw(&mut rng, 3);
        let val = bind(&mut rng, &carrier);
        let phi = gen::random_formula(&mut rng, &shape);
        let oracle = ProofEnumerator {
            store: &s,
            carrier: carrier.elements(),
            membership: carrier.membership(),
            predicate: &host_predicate,
            budget: 4096,
        };
        let mut env: Vec<(String, MsetId)> = val.iter().map(|(k, v)| (k.to_string(), v)).collect();
        let Some(proofs) = oracle.proofs(&phi, &mut env) else {
            skipped += 1;
            continue;
        };
        ensure!(
            all_distinct(&proofs),
            "oracle produced duplicate proofs for `{phi}`"
        );
        let model = Model::new(&s, &carrier).with_predicates(host_predicates());
        let count = model.sigma_count(&phi, &val).or_fail("sigma")?;
        ensure!(
            count == BigUint::from(proofs.len()),
            "`{phi}`: sigma count {count} but {} proof terms",
            proofs.len()
        );
        validated += 1;
    }
    Ok(format!(
        "1000 formulas ({inhabited} inhabited, largest count {} digits); 100 counts matched by proof enumeration ({skipped} over budget)",
        largest.to_string().len()
    ))
}

fn divergence() -> Verdict {
    let s = Store::new();
    let carrier = Carrier::msets(&s, 2, 2).or_fail("carrier")?;
    let report = check_axiom(&s, Axiom::Union, &carrier, Mode::Sigma).or_fail("check")?;
    for inst in &report.instances {
        if let Some(d) = inst
            .details
            .iter()
            .find(|d| d.condition_count >= BigUint::from(2u8) && d.condition_holds)
        {
            // recount the inner existential directly
            let model = Model::new(&s, &carrier);
            let inner = parse_formula("exists y. y in x /\\ z in y").expect("fixed formula");
            let val = Valuation::new().with("x", inst.params[0].1).with("z", d.z);
            let count = model.sigma_count(&inner, &val).or_fail("sigma")?;
            let truth = model.tau_eval(&inner, &val).or_fail("tau")?;
            ensure!(
                count == d.condition_count && truth,
                "report and direct evaluation disagree"
            );
            return Ok(format!(
                "x = {}, z = {}: inner exists has sigma count {count}, tau {truth}",
                s.show(inst.params[0].1),
                s.show(d.z)
            ));
        }
    }
    Err("no instance with sigma count >= 2 found in M(2,2)".into())
}

/// Every witness map choosing, for each `x` in `a`, some `y` with `(x, y)` in `rel`; the
/// evidence is the index of `y` among the related elements.
fn witness_maps(a_el: &[VsetId], rel: &[Vec<VsetId>]) -> Vec<WitnessMap> {
    let sizes: Vec<usize> = rel.iter().map(Vec::len).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; a_el.len()];
    if sizes.contains(&0) {
        return out;
    }
    loop {
        let mut w = WitnessMap::new();
        for (i, &x) in a_el.iter().enumerate() {
            w.insert(x, rel[i][cur[i]], cur[i]);
        }
        out.push(w);
        let mut i = a_el.len();
        loop {
            if i == 0 {
                return out;
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

struct Instance {
    a: VsetId,
    b: VsetId,
    a_el: Vec<VsetId>,
    /// `rel[i]` lists the `y` related to `a_el[i]`.
    rel: Vec<Vec<VsetId>>,
}

impl Instance {
    fn related(&self, x: VsetId, y: VsetId) -> bool {
        self.a_el
            .iter()
            .position(|&e| e == x)
            .is_some_and(|i| self.rel[i].contains(&y))
    }
}

/// All total relations between small subsets of V<=2.
fn total_relations(s: &Store) -> std::result::Result<Vec<Instance>, String> {
    let v2 = s.enumerate_vsets(2).or_fail("enumerate")?;
    let subsets = small_subsets(&v2, 2);
    let mut out = Vec::new();
    for a_el in &subsets {
        for b_el in &subsets {
            let nonempty: Vec<Vec<VsetId>> = small_subsets(b_el, b_el.len())
                .into_iter()
                .filter(|r| !r.is_empty())
                .collect();
            for rel in all_maps(a_el.len(), &(0..nonempty.len()).collect::<Vec<_>>()) {
                out.push(Instance {
                    a: s.image(a_el.iter().copied()),
                    b: s.image(b_el.iter().copied()),
                    a_el: a_el.clone(),
                    rel: rel.iter().map(|&i| nonempty[i].clone()).collect(),
                });
            }
        }
    }
    Ok(out)
}

fn choice() -> Verdict {
    let s = Store::new();
    let (mut relations, mut maps) = (0, 0);
    for inst in total_relations(&s)? {
        relations += 1;
        for w in witness_maps(&inst.a_el, &inst.rel) {
            let f = s.choice_function(inst.a, inst.b, &w).or_fail("choice")?;
            ensure!(
                s.is_fun(inst.a, inst.b, f),
                "choice output {} is not a function",
                s.show_set(f)
            );
            for p in s.elements(f) {
                let (x, y) = s.unpair(p).ok_or("graph element is not a pair")?;
                ensure!(
                    inst.related(x, y),
                    "f({}) = {} is not related",
                    s.show_set(x),
                    s.show_set(y)
                );
                ensure!(w.get(x) == Some(y), "graph disagrees with the witness map");
            }
            maps += 1;
        }
    }
    Ok(format!("{relations} total relations, {maps} witness maps"))
}

fn collection() -> Verdict {
    let s = Store::new();
    let space = SearchSpace::Explicit(s.enumerate_vsets(2).or_fail("enumerate")?);
    let clauses = |inst: &Instance, d: VsetId| {
        let one = inst
            .a_el
            .iter()
            .all(|&x| s.elements(d).iter().any(|&y| inst.related(x, y)));
        let two = s
            .elements(d)
            .iter()
            .all(|&y| inst.a_el.iter().any(|&x| inst.related(x, y)));
        (one, two)
    };
    let mut maps = 0;
    for inst in total_relations(&s)? {
        let c = s
            .subset_collection(inst.a, inst.b)
            .or_fail("subset collection")?;
        for w in witness_maps(&inst.a_el, &inst.rel) {
            let sc = s
                .strong_collection(inst.a, &w)
                .or_fail("strong collection")?;
            ensure!(
                clauses(&inst, sc) == (true, true),
                "strong collection clause fails"
            );
            let via = s
                .replacement_rel(inst.a, |x, y| w.get(x) == Some(y), &space)
                .or_fail("replacement")?;
            ensure!(
                via == sc,
                "replacement route gives {} not {}",
                s.show_set(via),
                s.show_set(sc)
            );
            let d = s.image(w.values());
            ensure!(
                s.member(d, c),
                "{} is not in the subset collection",
                s.show_set(d)
            );
            ensure!(
                clauses(&inst, d) == (true, true),
                "subset collection clause fails"
            );
            maps += 1;
        }
    }
    Ok(format!(
        "{maps} witness maps: both clauses, replacement route and membership in c"
    ))
}

/// Rank read off the literal: deepest brace nesting minus one.
fn literal_rank(text: &str) -> usize {
    let (mut depth, mut max) = (0usize, 0usize);
    for ch in text.chars() {
        match ch {
            '{' => {
                depth += 1;
                max = max.max(depth);
            }
            '}' => depth -= 1,
            _ => {}
        }
    }
    max - 1
}

fn eps_induction() -> Verdict {
    let s = Store::new();
    let mut rank =
        s.eps_induction(|_, below: &[usize]| below.iter().map(|r| r + 1).max().unwrap_or(0));
    let mut subjects = s.enumerate_vsets(3).or_fail("enumerate")?;
    subjects.extend((0..=5).map(|n| s.nat(n)));
    for &x in &subjects {
        let r = rank.eval(x);
        ensure!(
            r == s.rank(x.mset()) && r == literal_rank(&s.show_set(x)),
            "rank of {}: recursion {r}, direct {}",
            s.show_set(x),
            s.rank(x.mset())
        );
    }
    for n in 0..=5 {
        ensure!(rank.eval(s.nat(n)) == n, "rank of {n} is not {n}");
    }
    Ok(format!("{} sets: V<=3 and nat(0..5)", subjects.len()))
}

fn kuratowski() -> Verdict {
    let s = Store::new();
    let v2 = s.enumerate_vsets(2).or_fail("enumerate")?;
    let pairs: Vec<(VsetId, VsetId)> = v2
        .iter()
        .flat_map(|&x| v2.iter().map(move |&y| (x, y)))
        .collect();
    let coded: Vec<VsetId> = pairs.iter().map(|&(x, y)| s.ordered_pair(x, y)).collect();
    for (i, &p) in pairs.iter().enumerate() {
        ensure!(
            s.unpair(coded[i]) == Some(p),
            "unpair does not invert the pair"
        );
        for (j, &q) in pairs.iter().enumerate() {
            ensure!(
                (coded[i] == coded[j]) == (p == q),
                "pairs {i} and {j} collide"
            );
        }
    }
    Ok(format!("{} pairs over V<=2", pairs.len() * pairs.len()))
}

/// Invocations whose output must not depend on the run.
pub const DETERMINISM_ARGVS: &[&[&str]] = &[
    &["normalize", "--dedup", "{{},{},{{}}}"],
    &["enum", "--vsets", "--rank", "3"],
    &["enum", "--msets", "--rank", "2", "--width", "2", "--json"],
    &["quotient", "--rank", "2", "--width", "2"],
    &[
        "eval",
        "--mode",
        "sigma",
        "--carrier",
        "mset:2,2",
        "forall x. exists y. y in x \\/ x = y",
    ],
    &[
        "check",
        "union",
        "--carrier",
        "mset:2,2",
        "--mode",
        "sigma",
        "--json",
    ],
    &["ops", "exp", "{{},{{}}}", "{{},{{}}}"],
    &["setof", "{{{},{}},{{}}}"],
];

fn round_trips() -> Verdict {
    let s = Store::new();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut shape = FormulaShape::new(5, &["x", "y", "z'"]);
    shape.predicates = vec![("P".into(), 1), ("R_2".into(), 2), ("Q".into(), 3)];
    shape.exotic_names = true;
    for _ in 0..500 {
        let f = gen::random_formula(&mut rng, &shape);
        let text = f.to_string();
        let back = parse_formula(&text).or_fail(&format!("reparse `{text}`"))?;
        ensure!(back == f, "`{text}` reparses to a different formula");
    }
    for _ in 0..500 {
        let text = gen::random_literal_text(&mut rng, 3, 3);
        let x = s.parse_literal(&text).or_fail("parse")?;
        let printed = s.show(x);
        let y = s.parse_literal(&printed).or_fail("reparse")?;
        ensure!(
            y == x && s.show(y) == printed,
            "literal `{text}` does not round-trip"
        );
    }
    let v3 = s.enumerate_vsets(3).or_fail("enumerate")?;
    for _ in 0..500 {
        let mask: u32 = rng.gen_range(0..1 << 16);
        let v = s.image((0..16).filter(|i| mask >> i & 1 == 1).map(|i| v3[i]));
        let text = s.show_set(v);
        ensure!(
            s.parse_vset(&text).or_fail("parse")? == v,
            "set literal `{text}` does not round-trip"
        );
    }
    for argv in DETERMINISM_ARGVS {
        let argv: Vec<String> = argv.iter().map(|a| a.to_string()).collect();
        let first = crate::cli::run(&argv);
        let second = crate::cli::run(&argv);
        ensure!(
            first.code == 0,
            "`{}` failed: {}",
            argv.join(" "),
            first.stderr
        );
        ensure!(first == second, "`{}` is not deterministic", argv.join(" "));
    }
    Ok(format!(
        "500 formulas, 500 multiset and 500 set literals round-trip; {} CLI invocations repeat byte for byte",
        DETERMINISM_ARGVS.len()
    ))
}
