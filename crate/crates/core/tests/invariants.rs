//! Exhaustive checks of kernel and construction invariants on small fragments.

use std::collections::BTreeSet;

use itset::{MsetId, Store, VsetId};

#[test]
fn set_equality_agrees_with_multiset_equality_and_counts() {
    let s = Store::new();
    let v3 = s.enumerate_vsets(3).unwrap();
    let m22 = s.enumerate_msets(2, 2).unwrap();
    for &x in &v3 {
        for &y in &v3 {
            assert_eq!(x == y, x.mset() == y.mset());
            let by_members = v3.iter().all(|&z| s.member(z, x) == s.member(z, y));
            let by_counts = m22
                .iter()
                .all(|&z| s.count_in(z, x.mset()) == s.count_in(z, y.mset()));
            assert_eq!(by_members, by_counts);
            assert_eq!(by_members, x == y);
        }
    }
}

#[test]
fn binary_union_laws() {
    let s = Store::new();
    let v3 = s.enumerate_vsets(3).unwrap();
    for &x in &v3 {
        assert_eq!(s.union2(x, x), x);
        for &y in &v3 {
            assert_eq!(s.union2(x, y), s.union2(y, x));
            assert_eq!(s.union2(x, y), s.union(s.pair_set(x, y)));
            for &z in &v3 {
                assert_eq!(s.union2(s.union2(x, y), z), s.union2(x, s.union2(y, z)));
            }
        }
    }
}

#[test]
fn bisimilarity_is_an_equivalence_refined_by_equality() {
    let s = Store::new();
    let frag = s.enumerate_msets(2, 2).unwrap();
    for &x in &frag {
        assert!(s.bisim(x, x));
        for &y in &frag {
            let b = s.bisim(x, y);
            assert_eq!(b, s.bisim(y, x));
            if s.meq(x, y) {
                assert!(b);
            }
            assert_eq!(b, s.iterative_image(x) == s.iterative_image(y));
            for &z in &frag {
                if b && s.bisim(y, z) {
                    assert!(s.bisim(x, z));
                }
            }
        }
    }
}

#[test]
fn images_are_sets_and_fixed_on_sets() {
    let s = Store::new();
    for x in s.enumerate_msets(3, 2).unwrap() {
        let v = s.iterative_image(x);
        assert!(s.is_itset(v.mset()));
        assert_eq!(s.iterative_image(v.mset()), v);
        assert_eq!(s.is_itset(x), v.mset() == x);
    }
}

#[test]
fn certification_is_race_free() {
    let s = Store::new();
    let frag = s.enumerate_msets(2, 3).unwrap();
    let expected: Vec<bool> = {
        let fresh = Store::new();
        frag.iter()
            .map(|&x| {
                fresh
                    .to_vset(fresh.parse_literal(&s.show(x)).unwrap())
                    .is_ok()
            })
            .collect()
    };
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| scope.spawn(|| frag.iter().map(|&x| s.is_itset(x)).collect::<Vec<_>>()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    });
}

#[test]
fn exponential_graphs_are_injective_and_hereditarily_sets() {
    let s = Store::new();
    let v2 = s.enumerate_vsets(2).unwrap();
    let a = s.image(v2[..3].iter().copied());
    let b = s.image(v2[1..].iter().copied());
    let e = s.exp(a, b).unwrap();
    assert_eq!(s.elements(e).len(), 27);
    for f in s.elements(e) {
        assert!(s.is_itset(f.mset()));
        let firsts: BTreeSet<VsetId> = s
            .elements(f)
            .into_iter()
            .map(|p| s.unpair(p).unwrap().0)
            .collect();
        assert_eq!(firsts.len(), 3);
    }
}

#[test]
fn enumerated_multisets_respect_bounds() {
    let s = Store::new();
    let frag: Vec<MsetId> = s.enumerate_msets(3, 2).unwrap();
    let distinct: BTreeSet<_> = frag.iter().collect();
    assert_eq!(distinct.len(), frag.len());
    for &x in &frag {
        assert!(s.rank(x) <= 3);
        assert!(s.node(x).width() <= 2);
        assert!(s.children_of(x).iter().all(|(c, _)| frag.contains(c)));
    }
}
