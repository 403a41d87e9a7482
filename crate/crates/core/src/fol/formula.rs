use std::collections::BTreeSet;
use std::fmt;

/// First-order formula over `∈` and `=` with optional predicate symbols.
///
/// Negation and the biconditional are derived: `~p` is `p -> bot` and `p <-> q` is
/// `(p -> q) /\ (q -> p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Top,
    Mem(String, String),
    Eq(String, String),
    Pred(String, Vec<String>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

pub fn mem(x: &str, y: &str) -> Formula {
    Formula::Mem(x.into(), y.into())
}

pub fn eq(x: &str, y: &str) -> Formula {
    Formula::Eq(x.into(), y.into())
}

pub fn pred(name: &str, args: &[&str]) -> Formula {
    Formula::Pred(name.into(), args.iter().map(|a| a.to_string()).collect())
}

pub fn and(p: Formula, q: Formula) -> Formula {
    Formula::And(Box::new(p), Box::new(q))
}

pub fn or(p: Formula, q: Formula) -> Formula {
    Formula::Or(Box::new(p), Box::new(q))
}

pub fn imp(p: Formula, q: Formula) -> Formula {
    Formula::Imp(Box::new(p), Box::new(q))
}

pub fn not(p: Formula) -> Formula {
    imp(p, Formula::Bot)
}

pub fn iff(p: Formula, q: Formula) -> Formula {
    and(imp(p.clone(), q.clone()), imp(q, p))
}

pub fn forall(x: &str, body: Formula) -> Formula {
    Formula::Forall(x.into(), Box::new(body))
}

pub fn exists(x: &str, body: Formula) -> Formula {
    Formula::Exists(x.into(), Box::new(body))
}

/// `forall x. x in bound -> body`
pub fn forall_in(x: &str, bound: &str, body: Formula) -> Formula {
    forall(x, imp(mem(x, bound), body))
}

/// `exists x. x in bound /\ body`
pub fn exists_in(x: &str, bound: &str, body: Formula) -> Formula {
    exists(x, and(mem(x, bound), body))
}

impl Formula {
    /// Variables occurring free, in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut var = |v: &'a String, bound: &Vec<&'a str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Bot | Formula::Top => {}
            Formula::Mem(x, y) | Formula::Eq(x, y) => {
                var(x, bound);
                var(y, bound);
            }
            Formula::Pred(_, args) => args.iter().for_each(|a| var(a, bound)),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Imp(p, q) => {
                p.collect_free(bound, out);
                q.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Nesting depth of connectives and quantifiers; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot
            | Formula::Top
            | Formula::Mem(..)
            | Formula::Eq(..)
            | Formula::Pred(..) => 0,
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Imp(p, q) => {
                1 + p.depth().max(q.depth())
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.depth(),
        }
    }

    /// Predicate symbols with their arities, in order of first occurrence.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        self.visit(&mut |f| {
            if let Formula::Pred(name, args) = f {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), args.len()));
                }
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Imp(p, q) => {
                p.visit(f);
                q.visit(f);
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.visit(f),
            _ => {}
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => 0,
            Formula::Imp(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Formula::Bot => f.write_str("bot"),
            Formula::Top => f.write_str("top"),
            Formula::Mem(x, y) => write!(f, "{x} in {y}"),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Pred(name, args) => write!(f, "{name}({})", args.join(",")),
            Formula::And(p, q) => {
                p.write_at(f, 3)?;
                f.write_str(" /\\ ")?;
                q.write_at(f, 4)
            }
            Formula::Or(p, q) => {
                p.write_at(f, 2)?;
                f.write_str(" \\/ ")?;
                q.write_at(f, 3)
            }
            Formula::Imp(p, q) => {
                p.write_at(f, 2)?;
                f.write_str(" -> ")?;
                q.write_at(f, 1)
            }
            Formula::Forall(x, b) => {
                write!(f, "forall {x}. ")?;
                b.write_at(f, 0)
            }
            Formula::Exists(x, b) => {
                write!(f, "exists {x}. ")?;
                b.write_at(f, 0)
            }
        }
    }
}

/// Prints the formula in the ASCII grammar accepted by [`super::parse_formula`], with the
/// fewest parentheses that still parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_uses_minimal_parentheses() {
        let p = imp(
            imp(mem("x", "y"), Formula::Bot),
            or(Formula::Top, eq("a", "b")),
        );
        assert_eq!(p.to_string(), "(x in y -> bot) -> top \\/ a = b");
        let q = and(or(Formula::Top, Formula::Bot), forall("x", mem("x", "x")));
        assert_eq!(q.to_string(), "(top \\/ bot) /\\ (forall x. x in x)");
        let r = forall("x", exists("y", mem("x", "y")));
        assert_eq!(r.to_string(), "forall x. exists y. x in y");
        assert_eq!(pred("P", &["x", "y"]).to_string(), "P(x,y)");
    }

    #[test]
    fn free_variables_respect_binders() {
        let p = and(
            mem("x", "y"),
            exists("x", forall_in("z", "x", eq("z", "w"))),
        );
        let fv: Vec<_> = p.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["w", "x", "y"]);
        assert_eq!(p.depth(), 4);
    }
}
