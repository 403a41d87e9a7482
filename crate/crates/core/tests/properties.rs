//! Randomized properties of the kernel, the set constructions and the evaluator.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use itset::fol::eval::{Carrier, Membership, Model, Predicates, Valuation};
use itset::fol::formula::{self, Formula};
use itset::fol::parse_formula;
use itset::gen::{self, FormulaShape};
use itset::{MsetId, Store, VsetId, WitnessMap};

/// A literal multiset as an uninterned tree.
#[derive(Clone, Debug)]
struct Lit(Vec<Lit>);

fn lit() -> impl Strategy<Value = Lit> {
    Just(Lit(Vec::new())).prop_recursive(4, 40, 4, |inner| {
        prop::collection::vec(inner, 0..4).prop_map(Lit)
    })
}

fn intern(s: &Store, l: &Lit) -> MsetId {
    let kids: Vec<MsetId> = l.0.iter().map(|c| intern(s, c)).collect();
    s.mk_sup(&kids)
}

fn rename_free(phi: &Formula, from: &str, to: &str) -> Formula {
    let r = |v: &String| if v == from { to.to_string() } else { v.clone() };
    match phi {
        Formula::Bot | Formula::Top => phi.clone(),
        Formula::Mem(x, y) => Formula::Mem(r(x), r(y)),
        Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
        Formula::Pred(n, args) => Formula::Pred(n.clone(), args.iter().map(r).collect()),
        Formula::And(p, q) => formula::and(rename_free(p, from, to), rename_free(q, from, to)),
        Formula::Or(p, q) => formula::or(rename_free(p, from, to), rename_free(q, from, to)),
        Formula::Imp(p, q) => formula::imp(rename_free(p, from, to), rename_free(q, from, to)),
        Formula::Forall(x, _) | Formula::Exists(x, _) if x == from => phi.clone(),
        Formula::Forall(x, b) => formula::forall(x, rename_free(b, from, to)),
        Formula::Exists(x, b) => formula::exists(x, rename_free(b, from, to)),
    }
}

/// A random carrier from M(2,2) together with a valuation of `x` and `y` into it.
fn setup(s: &Store, rng: &mut ChaCha8Rng, size: usize) -> (Carrier, Valuation) {
    use rand::Rng;
    let pool = s.enumerate_msets(2, 2).unwrap();
    let c = gen::random_carrier(rng, &pool, size, Membership::Multiplicity);
    let pick = |rng: &mut ChaCha8Rng| c.elements()[rng.gen_range(0..c.len())];
    let val = Valuation::new().with("x", pick(rng)).with("y", pick(rng));
    (c, val)
}

fn shape(depth: usize) -> FormulaShape {
    let mut sh = FormulaShape::new(depth, &["x", "y"]);
    sh.antecedent_depth = 1;
    sh
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sup_ignores_order(kids in prop::collection::vec(lit(), 0..6), seed in any::<u64>()) {
        let s = Store::new();
        let ids: Vec<MsetId> = kids.iter().map(|k| intern(&s, k)).collect();
        let mut shuffled = ids.clone();
        rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(s.mk_sup(&ids), s.mk_sup(&shuffled));
    }

    #[test]
    fn counts_and_rank_of_sup(kids in prop::collection::vec(lit(), 0..6)) {
        let s = Store::new();
        let ids: Vec<MsetId> = kids.iter().map(|k| intern(&s, k)).collect();
        let x = s.mk_sup(&ids);
        for &z in &ids {
            let occurrences = ids.iter().filter(|&&c| c == z).count() as u64;
            prop_assert_eq!(s.count_in(z, x), occurrences);
        }
        let expected = ids.iter().map(|&c| s.rank(c) + 1).max().unwrap_or(0);
        prop_assert_eq!(s.rank(x), expected);
    }

    #[test]
    fn literals_round_trip(l in lit()) {
        let s = Store::new();
        let x = intern(&s, &l);
        let text = s.show(x);
        prop_assert_eq!(s.parse_literal(&text).unwrap(), x);
        let fresh = Store::new();
        prop_assert_eq!(fresh.show(fresh.parse_literal(&text).unwrap()), text);
        let doc = s.to_json(x);
        let json = serde_json::to_string(&doc).unwrap();
        prop_assert_eq!(fresh.from_json(&serde_json::from_str(&json).unwrap()).unwrap(), fresh.parse_literal(&s.show(x)).unwrap());
    }

    #[test]
    fn images_are_idempotent(ls in prop::collection::vec(lit(), 0..6)) {
        let s = Store::new();
        let sets: Vec<VsetId> = ls.iter().map(|l| s.iterative_image(intern(&s, l))).collect();
        let once = s.image(sets.iter().copied());
        prop_assert_eq!(s.image(s.elements(once)), once);
        for (l, &v) in ls.iter().zip(&sets) {
            let x = intern(&s, l);
            prop_assert!(s.bisim(x, v.mset()));
            prop_assert_eq!(s.is_itset(x), x == v.mset());
        }
    }

    #[test]
    fn formulas_round_trip(seed in any::<u64>()) {
        let mut sh = FormulaShape::new(6, &["x", "y'"]);
        sh.predicates = vec![("P".into(), 2), ("Q_1".into(), 1)];
        sh.exotic_names = true;
        let f = gen::random_formula(&mut ChaCha8Rng::seed_from_u64(seed), &sh);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn sigma_connective_laws(seed in any::<u64>(), size in 1usize..=4) {
        let s = Store::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, val) = setup(&s, &mut rng, size);
        let m = Model::new(&s, &c);
        let p = gen::random_formula(&mut rng, &shape(2));
        let q = gen::random_formula(&mut rng, &shape(2));
        let sp = m.sigma_count(&p, &val).unwrap();
        let sq = m.sigma_count(&q, &val).unwrap();
        prop_assert_eq!(m.sigma_count(&formula::or(p.clone(), q.clone()), &val).unwrap(), &sp + &sq);
        prop_assert_eq!(m.sigma_count(&formula::and(p.clone(), q.clone()), &val).unwrap(), &sp * &sq);
        let imp = m.sigma_count(&formula::imp(p.clone(), q.clone()), &val).unwrap();
        let pow = (0..u32::try_from(sp.clone()).unwrap()).fold(BigUint::one(), |acc, _| acc * &sq);
        prop_assert_eq!(imp, pow);
        prop_assert_eq!(m.tau_eval(&p, &val).unwrap(), !sp.is_zero());
    }

    #[test]
    fn sigma_quantifier_laws_and_substitution(seed in any::<u64>(), size in 1usize..=4) {
        let s = Store::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, val) = setup(&s, &mut rng, size);
        let m = Model::new(&s, &c);
        let body = gen::random_formula(&mut rng, &shape(3));
        let mut product = BigUint::one();
        let mut sum = BigUint::zero();
        for &a in c.elements() {
            let at = m.sigma_count(&body, &val.clone().with("x", a)).unwrap();
            let renamed = rename_free(&body, "x", "fresh_c");
            prop_assert_eq!(&m.sigma_count(&renamed, &val.clone().with("fresh_c", a)).unwrap(), &at);
            product *= &at;
            sum += &at;
        }
        prop_assert_eq!(m.sigma_count(&formula::forall("x", body.clone()), &val).unwrap(), product);
        prop_assert_eq!(m.sigma_count(&formula::exists("x", body), &val).unwrap(), sum);
    }

    #[test]
    fn choice_from_sigma_witnesses(a_mask in 0u32..16, b_mask in 1u32..16, rel in any::<u16>()) {
        let s = Store::new();
        let v2 = s.enumerate_vsets(2).unwrap();
        let pick = |mask: u32| s.image((0..4).filter(|i| mask >> i & 1 == 1).map(|i| v2[i]));
        let (a, b) = (pick(a_mask), pick(b_mask));
        let carrier = Carrier::vsets(&s, 2).unwrap();
        let index = move |m: MsetId| v2.iter().position(|v| v.mset() == m).unwrap();
        let mut preds = Predicates::new();
        preds.bind("R", 2, move |_, args| rel >> (4 * index(args[0]) + index(args[1])) & 1 == 1);
        let model = Model::new(&s, &carrier).with_predicates(preds);
        let phi = parse_formula("exists y. y in b /\\ R(x,y)").unwrap();
        let mut w = WitnessMap::new();
        for x in s.elements(a) {
            let val = Valuation::new().with("x", x).with("b", b);
            let witnesses = model.sigma_witnesses(&phi, &val).unwrap().unwrap();
            prop_assume!(!witnesses.is_empty());
            w.insert(x, s.to_vset(witnesses[0].0).unwrap(), 0);
        }
        let f = s.choice_function(a, b, &w).unwrap();
        prop_assert!(s.is_fun(a, b, f));
        for p in s.elements(f) {
            let (x, y) = s.unpair(p).unwrap();
            let holds = parse_formula("y in b /\\ R(x,y)").unwrap();
            let val = Valuation::new().with("x", x).with("y", y).with("b", b);
            prop_assert!(model.tau_eval(&holds, &val).unwrap());
        }
    }
}
