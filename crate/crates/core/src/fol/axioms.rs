//! Instance-by-instance checking of set-existence axioms over a finite carrier.
//!
//! Each set-existence axiom has the shape `∀params (hyp → ∃u ∀z (z ∈ u ↔ cond))`. For every
//! assignment of carrier elements to the parameters, the witness `u` is built with the set
//! constructions (applied to the iterative images of the parameters) and the body is evaluated
//! with `u` bound to it, whether or not the witness lies in the carrier. The closed axiom, with
//! `∃u` ranging over the carrier only, is evaluated separately.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde_json::{json, Value};

use super::eval::{Carrier, Model, Predicates, SigmaCount, Valuation};
use super::formula::*;
use crate::error::{Error, Result};
use crate::mset::{MsetId, Store};
use crate::vset::VsetId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    Extensionality,
    Empty,
    Pairing,
    Union,
    RestrictedSeparation,
    Replacement,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Extensionality,
        Axiom::Empty,
        Axiom::Pairing,
        Axiom::Union,
        Axiom::RestrictedSeparation,
        Axiom::Replacement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Extensionality => "extensionality",
            Axiom::Empty => "empty",
            Axiom::Pairing => "pairing",
            Axiom::Union => "union",
            Axiom::RestrictedSeparation => "restricted-separation",
            Axiom::Replacement => "replacement",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_string()))
    }
}

/// Which interpretation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sigma,
    Tau,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sigma" => Ok(Mode::Sigma),
            "tau" => Ok(Mode::Tau),
            _ => Err(Error::Invalid(format!("unknown mode `{s}`"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sigma => "sigma",
            Mode::Tau => "tau",
        })
    }
}

/// Result of one evaluation in the chosen mode. In sigma mode `count` is `None` when the count
/// exceeded the digit cap; such a count is necessarily positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub holds: bool,
    pub count: Option<SigmaCount>,
}

/// Both sides of `z ∈ u ↔ cond` at one `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detail {
    pub z: MsetId,
    pub member_count: SigmaCount,
    pub condition_count: SigmaCount,
    pub condition_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// Sample predicate used, empty for axioms without one.
    pub sample: String,
    pub params: Vec<(String, MsetId)>,
    pub witness: Option<MsetId>,
    pub witness_in_carrier: bool,
    pub hypothesis: Option<Outcome>,
    pub outcome: Outcome,
    pub details: Vec<Detail>,
}

/// The closed axiom evaluated with all quantifiers over the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedCheck {
    pub sample: String,
    pub formula: Formula,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub mode: Mode,
    pub closed: Vec<ClosedCheck>,
    pub instances: Vec<Instance>,
}

impl AxiomReport {
    pub fn all_instances_hold(&self) -> bool {
        self.instances.iter().all(|i| i.outcome.holds)
    }

    pub fn to_text(&self, store: &Store) -> String {
        let mut out = format!("axiom {} ({})\n", self.axiom, self.mode);
        for c in &self.closed {
            let tag = sample_tag(&c.sample);
            out.push_str(&format!(
                "closed{tag}: {} {}\n",
                verdict(c.outcome.holds),
                count_text(&c.outcome, self.mode)
            ));
        }
        for inst in &self.instances {
            let tag = sample_tag(&inst.sample);
            let params: Vec<String> = inst
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", store.show(*v)))
                .collect();
            out.push_str(&format!("instance{tag} {}", params.join(" ")));
            if let Some(w) = inst.witness {
                let place = if inst.witness_in_carrier {
                    "in carrier"
                } else {
                    "escapes carrier"
                };
                out.push_str(&format!(" witness={} ({place})", store.show(w)));
            }
            if let Some(h) = &inst.hypothesis {
                out.push_str(&format!(" hypothesis={}", verdict(h.holds)));
            }
            out.push_str(&format!(
                ": {} {}\n",
                verdict(inst.outcome.holds),
                count_text(&inst.outcome, self.mode)
            ));
            for d in inst
                .details
                .iter()
                .filter(|d| d.member_count != d.condition_count)
            {
                out.push_str(&format!(
                    "  z={}: sigma(z in u)={} sigma(condition)={} tau(condition)={}\n",
                    store.show(d.z),
                    d.member_count,
                    d.condition_count,
                    d.condition_holds
                ));
            }
        }
        out.push_str(&format!(
            "all instances: {}\n",
            verdict(self.all_instances_hold())
        ));
        out
    }

    pub fn to_json(&self, store: &Store) -> Value {
        let outcome = |o: &Outcome| {
            json!({
                "holds": o.holds,
                "count": o.count.as_ref().map(|c| c.to_string()),
            })
        };
        let closed: Vec<Value> = self
            .closed
            .iter()
            .map(|c| {
                json!({
                    "sample": c.sample,
                    "formula": c.formula.to_string(),
                    "outcome": outcome(&c.outcome),
                })
            })
            .collect();
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|i| {
                let params: serde_json::Map<String, Value> = i
                    .params
                    .iter()
                    .map(|(k, v)| (k.clone(), Value::String(store.show(*v))))
                    .collect();
                let details: Vec<Value> = i
                    .details
                    .iter()
                    .map(|d| {
                        json!({
                            "z": store.show(d.z),
                            "member_count": d.member_count.to_string(),
                            "condition_count": d.condition_count.to_string(),
                            "condition_holds": d.condition_holds,
                        })
                    })
                    .collect();
                json!({
                    "sample": i.sample,
                    "params": params,
                    "witness": i.witness.map(|w| store.show(w)),
                    "witness_in_carrier": i.witness_in_carrier,
                    "hypothesis": i.hypothesis.as_ref().map(outcome),
                    "outcome": outcome(&i.outcome),
                    "details": details,
                })
            })
            .collect();
        json!({
            "axiom": self.axiom.name(),
            "mode": self.mode.to_string(),
            "all_instances_hold": self.all_instances_hold(),
            "closed": closed,
            "instances": instances,
        })
    }
}

fn sample_tag(sample: &str) -> String {
    if sample.is_empty() {
        String::new()
    } else {
        format!("[{sample}]")
    }
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn count_text(o: &Outcome, mode: Mode) -> String {
    match (mode, &o.count) {
        (Mode::Tau, _) => String::new(),
        (Mode::Sigma, Some(c)) => format!("(count {c})"),
        (Mode::Sigma, None) => "(count above digit cap)".into(),
    }
}

type Construction = Box<dyn Fn(&Store, &[VsetId], &Model<'_>) -> VsetId>;

/// One comprehension-shaped axiom, possibly specialized to a sample predicate.
struct Schema {
    sample: String,
    params: Vec<&'static str>,
    hypothesis: Option<Formula>,
    /// Condition on `z` characterising the witness `u`.
    condition: Formula,
    construct: Construction,
    preds: Predicates,
}

impl Schema {
    fn body(&self) -> Formula {
        forall("z", iff(mem("z", "u"), self.condition.clone()))
    }

    fn instance_formula(&self) -> Formula {
        match &self.hypothesis {
            Some(h) => imp(h.clone(), self.body()),
            None => self.body(),
        }
    }

    fn closed_formula(&self) -> Formula {
        let mut f = exists("u", self.body());
        if let Some(h) = &self.hypothesis {
            f = imp(h.clone(), f);
        }
        for p in self.params.iter().rev() {
            f = forall(p, f);
        }
        f
    }
}

/// Bounded-quantifier formulas in `z` used as separation predicates.
fn separation_samples() -> Vec<(&'static str, Formula)> {
    vec![
        ("empty", forall_in("w", "z", Formula::Bot)),
        ("inhabited", exists_in("w", "z", Formula::Top)),
        (
            "has-empty-member",
            exists_in("w", "z", forall_in("v", "w", Formula::Bot)),
        ),
    ]
}

type Relation = fn(&Store, MsetId, MsetId) -> bool;
type Operation = fn(&Store, VsetId) -> VsetId;

/// Functional relations `P x y` used for replacement, each with the operation it is the graph
/// of.
fn replacement_samples() -> Vec<(&'static str, Relation, Operation)> {
    vec![
        ("identity", |_, x, y| x == y, |_, x| x),
        (
            "singleton",
            |s, x, y| y == s.mk_sup(&[x]),
            |s, x| s.singleton(x),
        ),
        (
            "constant-empty",
            |s, _, y| y == s.mempty(),
            |s, _| s.empty(),
        ),
    ]
}

fn schemas(axiom: Axiom) -> Vec<Schema> {
    let plain = |params: Vec<&'static str>, condition: Formula, construct: Construction| Schema {
        sample: String::new(),
        params,
        hypothesis: None,
        condition,
        construct,
        preds: Predicates::new(),
    };
    match axiom {
        Axiom::Extensionality => Vec::new(),
        Axiom::Empty => vec![plain(vec![], Formula::Bot, Box::new(|s, _, _| s.empty()))],
        Axiom::Pairing => vec![plain(
            vec!["x", "y"],
            or(eq("z", "x"), eq("z", "y")),
            Box::new(|s, p, _| s.pair_set(p[0], p[1])),
        )],
        Axiom::Union => vec![plain(
            vec!["x"],
            exists("y", and(mem("y", "x"), mem("z", "y"))),
            Box::new(|s, p, _| s.union(p[0])),
        )],
        Axiom::RestrictedSeparation => separation_samples()
            .into_iter()
            .map(|(name, phi)| {
                let test = phi.clone();
                Schema {
                    sample: name.to_string(),
                    params: vec!["x"],
                    hypothesis: None,
                    condition: and(mem("z", "x"), phi),
                    construct: Box::new(move |s, p, model| {
                        s.separation(p[0], |e| {
                            model
                                .tau_eval(&test, &Valuation::new().with("z", e))
                                .expect("closed sample predicate")
                        })
                    }),
                    preds: Predicates::new(),
                }
            })
            .collect(),
        Axiom::Replacement => replacement_samples()
            .into_iter()
            .map(|(name, rel, op)| {
                let mut preds = Predicates::new();
                preds.bind("P", 2, move |s, args| rel(s, args[0], args[1]));
                // forall x in a. exists y. P(x,y) /\ forall v. P(x,v) -> v = y
                let unique = exists(
                    "y",
                    and(
                        pred("P", &["x", "y"]),
                        forall("v", imp(pred("P", &["x", "v"]), eq("v", "y"))),
                    ),
                );
                Schema {
                    sample: name.to_string(),
                    params: vec!["a"],
                    hypothesis: Some(forall_in("x", "a", unique)),
                    condition: exists_in("x", "a", pred("P", &["x", "z"])),
                    construct: Box::new(move |s, p, _| s.replacement_fun(p[0], |x| op(s, x))),
                    preds,
                }
            })
            .collect(),
    }
}

fn outcome(model: &Model<'_>, mode: Mode, phi: &Formula, val: &Valuation) -> Result<Outcome> {
    match mode {
        Mode::Tau => Ok(Outcome {
            holds: model.tau_eval(phi, val)?,
            count: None,
        }),
        Mode::Sigma => match model.sigma_count(phi, val) {
            Ok(c) => Ok(Outcome {
                holds: !c.is_zero(),
                count: Some(c),
            }),
            Err(Error::Resource { .. }) => Ok(Outcome {
                holds: true,
                count: None,
            }),
            Err(e) => Err(e),
        },
    }
}

/// All tuples of carrier elements of length `k`, in lexicographic carrier order.
fn tuples(carrier: &Carrier, k: usize) -> Vec<Vec<MsetId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                carrier.elements().iter().map(move |&e| {
                    let mut t = t.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Checks one axiom over `carrier` in the given mode.
pub fn check_axiom(
    store: &Store,
    axiom: Axiom,
    carrier: &Carrier,
    mode: Mode,
) -> Result<AxiomReport> {
    if axiom == Axiom::Extensionality {
        return check_extensionality(store, carrier, mode);
    }
    let mut closed = Vec::new();
    let mut instances = Vec::new();
    for schema in schemas(axiom) {
        let model = Model::new(store, carrier).with_predicates(schema.preds.clone());
        let formula = schema.closed_formula();
        closed.push(ClosedCheck {
            sample: schema.sample.clone(),
            outcome: outcome(&model, mode, &formula, &Valuation::new())?,
            formula,
        });
        let body = schema.instance_formula();
        for tuple in tuples(carrier, schema.params.len()) {
            let mut val = Valuation::new();
            for (p, &v) in schema.params.iter().zip(&tuple) {
                val.bind(p, v);
            }
            let sets: Vec<VsetId> = tuple.iter().map(|&m| store.iterative_image(m)).collect();
            let witness = (schema.construct)(store, &sets, &model).mset();
            let hypothesis = schema
                .hypothesis
                .as_ref()
                .map(|h| outcome(&model, mode, h, &val))
                .transpose()?;
            let val_u = val.clone().with("u", witness);
            let mut details = Vec::with_capacity(carrier.len());
            for &z in carrier.elements() {
                let vz = val_u.clone().with("z", z);
                details.push(Detail {
                    z,
                    member_count: model.sigma_count(&mem("z", "u"), &vz)?,
                    condition_count: model
                        .sigma_count(&schema.condition, &vz)
                        .unwrap_or_else(|_| BigUint::zero()),
                    condition_holds: model.tau_eval(&schema.condition, &vz)?,
                });
            }
            instances.push(Instance {
                sample: schema.sample.clone(),
                params: schema
                    .params
                    .iter()
                    .map(|p| p.to_string())
                    .zip(tuple.iter().copied())
                    .collect(),
                witness: Some(witness),
                witness_in_carrier: carrier.contains(witness),
                hypothesis,
                outcome: outcome(&model, mode, &body, &val_u)?,
                details,
            });
        }
    }
    Ok(AxiomReport {
        axiom,
        mode,
        closed,
        instances,
    })
}

fn check_extensionality(store: &Store, carrier: &Carrier, mode: Mode) -> Result<AxiomReport> {
    let model = Model::new(store, carrier);
    let body = imp(forall("z", iff(mem("z", "x"), mem("z", "y"))), eq("x", "y"));
    let formula = forall("x", forall("y", body.clone()));
    let closed = vec![ClosedCheck {
        sample: String::new(),
        outcome: outcome(&model, mode, &formula, &Valuation::new())?,
        formula,
    }];
    let mut instances = Vec::new();
    for t in tuples(carrier, 2) {
        let val = Valuation::new().with("x", t[0]).with("y", t[1]);
        instances.push(Instance {
            sample: String::new(),
            params: vec![("x".into(), t[0]), ("y".into(), t[1])],
            witness: None,
            witness_in_carrier: false,
            hypothesis: None,
            outcome: outcome(&model, mode, &body, &val)?,
            details: Vec::new(),
        });
    }
    Ok(AxiomReport {
        axiom: Axiom::Extensionality,
        mode,
        closed,
        instances,
    })
}
