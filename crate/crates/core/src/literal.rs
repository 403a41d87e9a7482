//! Brace literals (`{}`, `{{},{}}`, ...) and the JSON node-table export.
//!
//! Printing is canonical: children are ordered by rank, then by their own printed form, and a
//! child of multiplicity `k` is written `k` times. The result does not depend on the order in
//! which nodes were interned.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mset::{MsetId, Multiplicity, Store};

impl Store {
    /// Parses a brace literal. Whitespace is ignored and duplicates are kept.
    pub fn parse_literal(&self, text: &str) -> Result<MsetId> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        skip_ws(&chars, &mut pos);
        let id = self.parse_node(&chars, &mut pos)?;
        skip_ws(&chars, &mut pos);
        if pos < chars.len() {
            return Err(syntax(
                pos,
                format!("unexpected `{}` after literal", chars[pos]),
            ));
        }
        Ok(id)
    }

    fn parse_node(&self, chars: &[char], pos: &mut usize) -> Result<MsetId> {
        // Explicit stack so deeply nested input cannot overflow the call stack.
        let mut stack: Vec<Vec<MsetId>> = Vec::new();
        expect(chars, pos, '{')?;
        stack.push(Vec::new());
        let mut just_opened = true;
        loop {
            skip_ws(chars, pos);
            match (just_opened, chars.get(*pos)) {
                (true, Some('{')) => {
                    *pos += 1;
                    stack.push(Vec::new());
                }
                (_, Some('}')) => {
                    *pos += 1;
                    let id = self.mk_sup(&stack.pop().expect("open brace"));
                    match stack.last_mut() {
                        Some(parent) => parent.push(id),
                        None => return Ok(id),
                    }
                    just_opened = false;
                }
                (false, Some(',')) => {
                    *pos += 1;
                    skip_ws(chars, pos);
                    expect(chars, pos, '{')?;
                    stack.push(Vec::new());
                    just_opened = true;
                }
                (true, c) => return Err(unexpected(*pos, c, "`{` or `}`")),
                (false, c) => return Err(unexpected(*pos, c, "`,` or `}`")),
            }
        }
    }

    /// Canonical brace literal of `x`.
    pub fn show(&self, x: MsetId) -> String {
        self.literal_of(x).to_string()
    }

    pub(crate) fn literal_of(&self, x: MsetId) -> Arc<str> {
        if let Some(s) = self.memo.literal.read().get(&x) {
            return s.clone();
        }
        let mut kids: Vec<(usize, Arc<str>, Multiplicity)> = self
            .children_of(x)
            .iter()
            .map(|&(c, m)| (self.rank(c), self.literal_of(c), m))
            .collect();
        kids.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let mut out = String::from("{");
        let mut first = true;
        for (_, lit, m) in &kids {
            for _ in 0..*m {
                if !first {
                    out.push(',');
                }
                first = false;
                out.push_str(lit);
            }
        }
        out.push('}');
        let lit: Arc<str> = out.into();
        self.memo.literal.write().entry(x).or_insert(lit).clone()
    }

    /// Children of `x` in canonical display order.
    pub(crate) fn display_children(&self, x: MsetId) -> Vec<(MsetId, Multiplicity)> {
        let mut kids: Vec<_> = self.children_of(x).to_vec();
        kids.sort_by_cached_key(|&(c, _)| (self.rank(c), self.literal_of(c)));
        kids
    }

    /// Node table of everything reachable from `root`, children before parents.
    pub fn to_json(&self, root: MsetId) -> MsetJson {
        let mut local: HashMap<MsetId, usize> = HashMap::new();
        let mut nodes = Vec::new();
        // Post-order DFS; the bool marks that the children have been pushed already.
        let mut stack = vec![(root, false)];
        while let Some((x, expanded)) = stack.pop() {
            if local.contains_key(&x) {
                continue;
            }
            let kids = self.display_children(x);
            if expanded {
                let children = kids.iter().map(|&(c, m)| (local[&c], m)).collect();
                let id = nodes.len();
                nodes.push(NodeJson { id, children });
                local.insert(x, id);
            } else {
                stack.push((x, true));
                for &(c, _) in kids.iter().rev() {
                    if !local.contains_key(&c) {
                        stack.push((c, false));
                    }
                }
            }
        }
        MsetJson {
            root: local[&root],
            nodes,
        }
    }

    /// Interns a node table. Every child reference must point to an earlier node.
    pub fn from_json(&self, doc: &MsetJson) -> Result<MsetId> {
        let mut ids: HashMap<usize, MsetId> = HashMap::new();
        for node in &doc.nodes {
            let mut bag = Vec::with_capacity(node.children.len());
            for &(c, m) in &node.children {
                let id = ids.get(&c).ok_or_else(|| {
                    Error::Invalid(format!(
                        "node {} references unknown or later node {c}",
                        node.id
                    ))
                })?;
                bag.push((*id, m));
            }
            if ids.insert(node.id, self.mk_bag(bag)).is_some() {
                return Err(Error::Invalid(format!("duplicate node id {}", node.id)));
            }
        }
        ids.get(&doc.root)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("root {} is not a node", doc.root)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsetJson {
    pub nodes: Vec<NodeJson>,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub children: Vec<(usize, Multiplicity)>,
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while chars.get(*pos).is_some_and(|c| c.is_whitespace()) {
        *pos += 1;
    }
}

fn expect(chars: &[char], pos: &mut usize, want: char) -> Result<()> {
    match chars.get(*pos) {
        Some(&c) if c == want => {
            *pos += 1;
            Ok(())
        }
        Some(c) => Err(syntax(*pos, format!("expected `{want}`, found `{c}`"))),
        None => Err(syntax(*pos, format!("expected `{want}`"))),
    }
}

fn unexpected(pos: usize, found: Option<&char>, wanted: &str) -> Error {
    match found {
        Some(c) => syntax(pos, format!("expected {wanted}, found `{c}`")),
        None => syntax(pos, format!("expected {wanted}, found end of input")),
    }
}

fn syntax(pos: usize, message: String) -> Error {
    Error::Syntax {
        column: pos + 1,
        message,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_literals() {
        let s = Store::new();
        let e = s.parse_literal("{}").unwrap();
        assert_eq!(e, s.mempty());
        let ee = s.parse_literal(" { {} , {} } ").unwrap();
        assert_eq!(s.count_in(e, ee), 2);
        assert_eq!(s.show(ee), "{{},{}}");
    }

    #[test]
    fn printing_ignores_interning_history() {
        let a = Store::new();
        let b = Store::new();
        // Intern the pieces in opposite orders.
        let x = a.parse_literal("{{{{}}},{{},{{}}}}").unwrap();
        b.parse_literal("{{},{{}}}").unwrap();
        let y = b.parse_literal("{{{},{{}}},{{{}}}}").unwrap();
        assert_eq!(a.show(x), b.show(y));
    }

    #[test]
    fn syntax_errors_report_columns() {
        let s = Store::new();
        let col = |t: &str| match s.parse_literal(t) {
            Err(Error::Syntax { column, .. }) => column,
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(col(""), 1);
        assert_eq!(col("{"), 2);
        assert_eq!(col("{}}"), 3);
        assert_eq!(col("{{},}"), 5);
        assert_eq!(col("{{}{}}"), 4);
        assert_eq!(col("{x}"), 2);
        assert_eq!(col("{,{}}"), 2);
    }

    #[test]
    fn json_is_topological_and_round_trips() {
        let s = Store::new();
        let x = s.parse_literal("{{},{},{{}},{{{}}}}").unwrap();
        let doc = s.to_json(x);
        for n in &doc.nodes {
            assert!(n.children.iter().all(|&(c, _)| c < n.id));
        }
        assert_eq!(doc.nodes.len(), 4);
        assert_eq!(doc.root, 3);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"nodes":[{"id":0,"children":[]}"#));
        let other = Store::new();
        let back: MsetJson = serde_json::from_str(&text).unwrap();
        let y = other.from_json(&back).unwrap();
        assert_eq!(other.show(y), s.show(x));
    }

    #[test]
    fn json_rejects_forward_references() {
        let s = Store::new();
        let doc = MsetJson {
            nodes: vec![NodeJson {
                id: 0,
                children: vec![(1, 1)],
            }],
            root: 0,
        };
        assert!(matches!(s.from_json(&doc), Err(Error::Invalid(_))));
    }
}
