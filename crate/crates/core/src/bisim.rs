//! Bisimilarity of multisets and the quotient map onto iterative sets.
//!
//! Two multisets are bisimilar when every child of one is bisimilar to some child of the other
//! and vice versa. Multiplicities are ignored, so bisimilarity identifies exactly the multisets
//! that denote the same set; [`Store::iterative_image`] picks the canonical set for each class.

use serde::Serialize;

use crate::mset::{MsetId, Store};
use crate::vset::VsetId;

/// Partition of a fragment into bisimilarity classes with one set per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisimReport {
    /// Classes in order of their first member in the fragment; members keep fragment order.
    pub classes: Vec<Vec<MsetId>>,
    /// `representatives[i]` is the iterative image of every member of `classes[i]`.
    pub representatives: Vec<VsetId>,
}

#[derive(Serialize)]
struct ClassJson {
    representative: String,
    members: Vec<String>,
}

impl BisimReport {
    pub fn to_text(&self, store: &Store) -> String {
        let mut out = String::new();
        for (i, (class, rep)) in self.classes.iter().zip(&self.representatives).enumerate() {
            let members: Vec<String> = class.iter().map(|&m| store.show(m)).collect();
            out.push_str(&format!(
                "class {i}: {} <- [{}]\n",
                store.show_set(*rep),
                members.join(", ")
            ));
        }
        out
    }

    pub fn to_json(&self, store: &Store) -> serde_json::Value {
        let classes: Vec<ClassJson> = self
            .classes
            .iter()
            .zip(&self.representatives)
            .map(|(class, rep)| ClassJson {
                representative: store.show_set(*rep),
                members: class.iter().map(|&m| store.show(m)).collect(),
            })
            .collect();
        serde_json::json!({ "classes": classes })
    }
}

impl Store {
    /// Bisimilarity, decided by structural recursion and memoized on ordered pairs.
    pub fn bisim(&self, x: MsetId, y: MsetId) -> bool {
        if let Some(&b) = self.memo.bisim.read().get(&(x, y)) {
            return b;
        }
        let xs = self.children_of(x);
        let ys = self.children_of(y);
        let result = xs
            .iter()
            .all(|&(a, _)| ys.iter().any(|&(b, _)| self.bisim(a, b)))
            && ys
                .iter()
                .all(|&(b, _)| xs.iter().any(|&(a, _)| self.bisim(a, b)));
        *self.memo.bisim.write().entry((x, y)).or_insert(result)
    }

    /// Hereditary deduplication: the image of the iterative images of the children.
    pub fn iterative_image(&self, x: MsetId) -> VsetId {
        if let Some(&v) = self.memo.image.read().get(&x) {
            return self.to_vset(v).expect("memoized image is a set");
        }
        let images: Vec<VsetId> = self
            .children_of(x)
            .iter()
            .map(|&(c, _)| self.iterative_image(c))
            .collect();
        let v = self.image(images);
        self.memo.image.write().entry(x).or_insert(v.mset());
        v
    }

    /// Partitions `fragment` by bisimilarity and attaches the iterative image of each class.
    pub fn quotient(&self, fragment: &[MsetId]) -> BisimReport {
        let mut classes: Vec<Vec<MsetId>> = Vec::new();
        for &x in fragment {
            match classes.iter_mut().find(|c| self.bisim(c[0], x)) {
                Some(class) => {
                    if !class.contains(&x) {
                        class.push(x);
                    }
                }
                None => classes.push(vec![x]),
            }
        }
        let representatives = classes.iter().map(|c| self.iterative_image(c[0])).collect();
        BisimReport {
            classes,
            representatives,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisim_examples() {
        let s = Store::new();
        let e = s.mempty();
        let se = s.mk_sup(&[e]);
        let ee = s.mk_sup(&[e, e]);
        let sse = s.mk_sup(&[se]);
        assert!(s.bisim(e, e));
        assert!(s.bisim(ee, se));
        assert!(!s.bisim(se, sse));
        assert!(!s.bisim(e, se));
    }

    #[test]
    fn images() {
        let s = Store::new();
        assert_eq!(s.iterative_image(s.mempty()).mset(), s.mempty());
        let x = s.parse_literal("{{},{},{{}}}").unwrap();
        assert_eq!(s.show_set(s.iterative_image(x)), "{{},{{}}}");
        let deep = s.parse_literal("{{{},{}},{{}}}").unwrap();
        assert_eq!(s.show_set(s.iterative_image(deep)), "{{{}}}");
    }

    #[test]
    fn quotient_of_small_fragment() {
        let s = Store::new();
        assert_eq!(s.quotient(&[s.mempty()]).classes, vec![vec![s.mempty()]]);
        let frag = s.enumerate_msets(1, 2).unwrap();
        let q = s.quotient(&frag);
        assert_eq!(q.classes, vec![vec![frag[0]], vec![frag[1], frag[2]]]);
        assert_eq!(q.representatives[1].mset(), frag[1]);
        assert_eq!(
            q.to_text(&s),
            "class 0: {} <- [{}]\nclass 1: {{}} <- [{{}}, {{},{}}]\n"
        );
    }
}
