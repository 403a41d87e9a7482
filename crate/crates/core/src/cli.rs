//! The `itset` command line. [`run`] is the whole program minus process I/O, so it can be
//! driven from tests.
//!
//! Exit codes: 0 on success, 1 on domain errors (bad literals, failed checks, exceeded
//! limits), 2 on usage errors.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fol::axioms::{check_axiom, Axiom, Mode};
use crate::fol::eval::{Carrier, Membership, Model, Valuation};
use crate::fol::parse_formula;
use crate::mset::{Limits, MsetId, Store};
use crate::selftest;
use crate::vset::VsetId;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "itset",
    version,
    about = "Iterative multisets and sets: kernel, constructions and formula evaluation"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest enumeration or exponential the tool will build.
    #[arg(long, global = true, default_value_t = 100_000, value_name = "N")]
    max_elements: usize,
    /// Largest number of decimal digits a sigma count may have.
    #[arg(long, global = true, default_value_t = 10_000, value_name = "N")]
    max_count_digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of a literal.
    Normalize {
        /// Deduplicate hereditarily instead of rejecting repeated elements.
        #[arg(long)]
        dedup: bool,
        /// Treat the literal as a multiset and keep multiplicities.
        #[arg(long, conflicts_with = "dedup")]
        mset: bool,
        literal: String,
    },
    /// Evaluate a formula over a finite carrier.
    Eval {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// vset:RANK, mset:RANK,WIDTH or list:FILE
        #[arg(long)]
        carrier: String,
        /// Bind a free variable, as VAR=LITERAL.
        #[arg(long = "let", value_name = "VAR=LITERAL")]
        lets: Vec<String>,
        formula: String,
    },
    /// Check every instance of an axiom over a carrier.
    Check {
        /// extensionality, empty, pairing, union, restricted-separation or replacement
        axiom: String,
        #[arg(long)]
        carrier: String,
        #[arg(long, value_enum, default_value = "tau")]
        mode: ModeArg,
    },
    /// Enumerate a rank-bounded fragment.
    Enum {
        #[arg(long, conflicts_with = "msets", required_unless_present = "msets")]
        vsets: bool,
        #[arg(long, requires = "width")]
        msets: bool,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        width: Option<usize>,
        /// Print only the number of elements.
        #[arg(long)]
        count: bool,
    },
    /// Decide bisimilarity of two multisets.
    Bisim { x: String, y: String },
    /// Print the set a multiset denotes.
    Setof { x: String },
    /// Partition M(RANK,WIDTH) into bisimilarity classes.
    Quotient {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        width: usize,
    },
    /// Build a set with one of the set constructions.
    Ops {
        #[command(subcommand)]
        op: Op,
    },
    /// Run the acceptance suite.
    Selftest {
        /// Run a single criterion, by name or number.
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Op {
    Empty,
    Nat {
        n: usize,
    },
    Pair {
        x: String,
        y: String,
    },
    Union {
        x: String,
    },
    /// Elements of X satisfying a formula with one free variable.
    Sep {
        x: String,
        formula: String,
    },
    Exp {
        a: String,
        b: String,
    },
    Opair {
        x: String,
        y: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Sigma,
    Tau,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Sigma => Mode::Sigma,
            ModeArg::Tau => Mode::Tau,
        }
    }
}

/// A carrier description validated before any kernel work.
#[derive(Debug)]
enum CarrierSpec {
    Vsets(usize),
    Msets(usize, usize),
    List(Vec<String>),
}

fn parse_carrier(spec: &str) -> std::result::Result<CarrierSpec, String> {
    let bad =
        || format!("invalid carrier `{spec}`: expected vset:RANK, mset:RANK,WIDTH or list:FILE");
    let (kind, rest) = spec.split_once(':').ok_or_else(bad)?;
    match kind {
        "vset" => rest.parse().map(CarrierSpec::Vsets).map_err(|_| bad()),
        "mset" => {
            let (r, w) = rest.split_once(',').ok_or_else(bad)?;
            Ok(CarrierSpec::Msets(
                r.parse().map_err(|_| bad())?,
                w.parse().map_err(|_| bad())?,
            ))
        }
        "list" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| format!("cannot read carrier file `{rest}`: {e}"))?;
            Ok(CarrierSpec::List(
                text.lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .filter(|l| !l.is_empty())
                    .map(str::to_string)
                    .collect(),
            ))
        }
        _ => Err(bad()),
    }
}

fn build_carrier(store: &Store, spec: &CarrierSpec) -> Result<Carrier> {
    match spec {
        CarrierSpec::Vsets(r) => Carrier::vsets(store, *r),
        CarrierSpec::Msets(r, w) => Carrier::msets(store, *r, *w),
        CarrierSpec::List(lines) => {
            let elements = lines
                .iter()
                .map(|l| store.parse_literal(l))
                .collect::<Result<Vec<_>>>()?;
            Ok(Carrier::list(elements, Membership::Multiplicity))
        }
    }
}

fn parse_binding(text: &str) -> std::result::Result<(String, String), String> {
    text.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("invalid binding `{text}`: expected VAR=LITERAL"))
}

/// Runs the program on `argv`, which excludes the program name.
pub fn run(argv: &[String]) -> Output {
    let cli =
        match Cli::try_parse_from(std::iter::once("itset".to_string()).chain(argv.iter().cloned()))
        {
            Ok(c) => c,
            Err(e) => {
                let code = if e.use_stderr() { 2 } else { 0 };
                let text = e.render().to_string();
                return if code == 0 {
                    Output {
                        code,
                        stdout: text,
                        stderr: String::new(),
                    }
                } else {
                    Output {
                        code,
                        stdout: String::new(),
                        stderr: text,
                    }
                };
            }
        };
    let mut out = Output {
        code: 0,
        stdout: String::new(),
        stderr: String::new(),
    };
    match execute(&cli, &mut out) {
        Ok(()) => {}
        Err(Failure::Usage(msg)) => {
            out.code = 2;
            out.stdout.clear();
            let _ = writeln!(out.stderr, "error: {msg}");
        }
        Err(Failure::Domain(e)) => {
            out.code = 1;
            out.stdout.clear();
            let _ = writeln!(out.stderr, "error: {e}");
        }
    }
    out
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn usage(msg: String) -> Failure {
    Failure::Usage(msg)
}

fn execute(cli: &Cli, out: &mut Output) -> std::result::Result<(), Failure> {
    let store = Store::with_limits(Limits {
        max_elements: cli.max_elements,
        max_count_digits: cli.max_count_digits,
    });
    let s = &store;
    let json = cli.json;
    let emit_set = |out: &mut Output, v: VsetId| {
        if json {
            out.stdout = format!("{}\n", json!({ "set": s.show_set(v) }));
        } else {
            out.stdout = format!("{}\n", s.show_set(v));
        }
    };
    match &cli.command {
        Command::Normalize {
            dedup,
            mset,
            literal,
        } => {
            let x = s.parse_literal(literal)?;
            let (text, deduplicated) = if *mset {
                (s.show(x), false)
            } else if *dedup {
                let v = s.iterative_image(x);
                (s.show_set(v), v.mset() != x)
            } else {
                (s.show_set(s.to_vset(x)?), false)
            };
            if deduplicated {
                out.stderr.push_str("note: deduplicated under --dedup\n");
            }
            out.stdout = if json {
                format!(
                    "{}\n",
                    json!({ "literal": text, "deduplicated": deduplicated })
                )
            } else {
                format!("{text}\n")
            };
        }
        Command::Eval {
            mode,
            carrier,
            lets,
            formula,
        } => {
            let spec = parse_carrier(carrier).map_err(usage)?;
            let bindings = lets
                .iter()
                .map(|b| parse_binding(b))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(usage)?;
            let phi = parse_formula(formula)?;
            let carrier = build_carrier(s, &spec)?;
            let mut val = Valuation::new();
            for (k, lit) in &bindings {
                val.bind(k, s.parse_literal(lit)?);
            }
            let model = Model::new(s, &carrier);
            let result = match Mode::from(*mode) {
                Mode::Sigma => model.sigma_count(&phi, &val)?.to_string(),
                Mode::Tau => model.tau_eval(&phi, &val)?.to_string(),
            };
            out.stdout = if json {
                let value = if matches!(mode, ModeArg::Tau) {
                    json!(result == "true")
                } else {
                    json!(result)
                };
                format!(
                    "{}\n",
                    json!({
                        "mode": Mode::from(*mode).to_string(),
                        "formula": phi.to_string(),
                        "carrier_size": carrier.len(),
                        "value": value,
                    })
                )
            } else {
                format!("{result}\n")
            };
        }
        Command::Check {
            axiom,
            carrier,
            mode,
        } => {
            let spec = parse_carrier(carrier).map_err(usage)?;
            let axiom: Axiom = axiom.parse()?;
            let carrier = build_carrier(s, &spec)?;
            let report = check_axiom(s, axiom, &carrier, Mode::from(*mode))?;
            out.stdout = if json {
                format!("{}\n", report.to_json(s))
            } else {
                report.to_text(s)
            };
        }
        Command::Enum {
            vsets,
            msets: _,
            rank,
            width,
            count,
        } => {
            let elements: Vec<String> = if *vsets {
                s.enumerate_vsets(*rank)?
                    .into_iter()
                    .map(|v| s.show_set(v))
                    .collect()
            } else {
                let w = width.ok_or_else(|| usage("--msets requires --width".into()))?;
                s.enumerate_msets(*rank, w)?
                    .into_iter()
                    .map(|m| s.show(m))
                    .collect()
            };
            out.stdout = match (json, count) {
                (true, true) => format!("{}\n", json!({ "count": elements.len() })),
                (true, false) => format!(
                    "{}\n",
                    json!({ "count": elements.len(), "elements": elements })
                ),
                (false, true) => format!("{}\n", elements.len()),
                (false, false) => elements.iter().map(|e| format!("{e}\n")).collect(),
            };
        }
        Command::Bisim { x, y } => {
            let b = s.bisim(s.parse_literal(x)?, s.parse_literal(y)?);
            out.stdout = if json {
                format!("{}\n", json!({ "bisimilar": b }))
            } else {
                format!("{b}\n")
            };
        }
        Command::Setof { x } => {
            let v = s.iterative_image(s.parse_literal(x)?);
            emit_set(out, v);
        }
        Command::Quotient { rank, width } => {
            let frag = s.enumerate_msets(*rank, *width)?;
            let report = s.quotient(&frag);
            out.stdout = if json {
                format!("{}\n", report.to_json(s))
            } else {
                report.to_text(s)
            };
        }
        Command::Ops { op } => {
            let v = match op {
                Op::Empty => s.empty(),
                Op::Nat { n } => s.nat(*n),
                Op::Pair { x, y } => s.pair_set(s.parse_vset(x)?, s.parse_vset(y)?),
                Op::Union { x } => s.union(s.parse_vset(x)?),
                Op::Sep { x, formula } => separate(s, s.parse_vset(x)?, formula)?,
                Op::Exp { a, b } => s.exp(s.parse_vset(a)?, s.parse_vset(b)?)?,
                Op::Opair { x, y } => s.ordered_pair(s.parse_vset(x)?, s.parse_vset(y)?),
            };
            emit_set(out, v);
        }
        Command::Selftest { only } => {
            let chosen: Vec<&selftest::Criterion> = match only {
                Some(key) => vec![selftest::find(key)
                    .ok_or_else(|| usage(format!("unknown criterion `{key}`")))?],
                None => selftest::CRITERIA.iter().collect(),
            };
            let results: Vec<_> = chosen.into_iter().map(selftest::run_criterion).collect();
            for r in &results {
                let _ = writeln!(
                    out.stderr,
                    "[{:>2}] {} took {:.2?}",
                    r.id, r.name, r.elapsed
                );
            }
            let passed = results.iter().filter(|r| r.passed).count();
            if json {
                let criteria: Vec<_> = results
                    .iter()
                    .map(|r| {
                        json!({
                            "id": r.id,
                            "name": r.name,
                            "title": r.title,
                            "passed": r.passed,
                            "detail": r.detail,
                        })
                    })
                    .collect();
                out.stdout = format!(
                    "{}\n",
                    json!({ "criteria": criteria, "passed": passed, "total": results.len() })
                );
            } else {
                for r in &results {
                    let _ = writeln!(out.stdout, "{}", r.line());
                }
                let _ = writeln!(out.stdout, "{passed}/{} criteria passed", results.len());
            }
            if passed != results.len() {
                out.code = 1;
            }
        }
    }
    Ok(())
}

/// Separation by a formula with one free variable, evaluated over the transitive closure of
/// `{x}` so that every quantifier ranges over sets below `x`.
fn separate(s: &Store, x: VsetId, text: &str) -> Result<VsetId> {
    let phi = parse_formula(text)?;
    let free = phi.free_vars();
    let var = match free.len() {
        1 => free.into_iter().next().expect("one free variable"),
        n => {
            return Err(Error::Invalid(format!(
                "separation formula must have exactly one free variable, found {n}"
            )))
        }
    };
    let mut closure: BTreeSet<MsetId> = BTreeSet::new();
    let mut todo = vec![x.mset()];
    while let Some(m) = todo.pop() {
        if closure.insert(m) {
            todo.extend(s.children_of(m).iter().map(|&(c, _)| c));
        }
    }
    let carrier = Carrier::list(closure, Membership::Boolean);
    let model = Model::new(s, &carrier);
    let mut err = None;
    let v = s.separation(x, |e| {
        match model.tau_eval(&phi, &Valuation::new().with(&var, e)) {
            Ok(b) => b,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Output {
        run(&args.iter().map(|a| a.to_string()).collect::<Vec<_>>())
    }

    #[test]
    fn normalize_and_dedup() {
        let o = call(&["normalize", "--dedup", "{{},{}}"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "{{}}\n"));
        assert!(o.stderr.contains("deduplicated under --dedup"));
        let o = call(&["normalize", "{{},{}}"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("not set-like"));
        assert_eq!(
            call(&["normalize", "--mset", "{{},{}}"]).stdout,
            "{{},{}}\n"
        );
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&["frobnicate"]).code, 2);
        assert_eq!(
            call(&["eval", "--mode", "tau", "--carrier", "vset:x", "top"]).code,
            2
        );
        assert_eq!(call(&["enum", "--msets", "--rank", "2"]).code, 2);
        assert_eq!(call(&["selftest", "--only", "nope"]).code, 2);
        assert_eq!(call(&["--help"]).code, 0);
    }

    #[test]
    fn ops() {
        assert_eq!(call(&["ops", "nat", "2"]).stdout, "{{},{{}}}\n");
        assert_eq!(
            call(&["ops", "sep", "{{},{{}}}", "exists w in z. top"]).stdout,
            "{{{}}}\n"
        );
        assert_eq!(call(&["ops", "sep", "{}", "x in y"]).code, 1);
        assert_eq!(call(&["ops", "exp", "{{}}", "{}"]).stdout, "{}\n");
    }

    #[test]
    fn eval_with_bindings() {
        let o = call(&[
            "eval",
            "--mode",
            "sigma",
            "--carrier",
            "mset:1,2",
            "--let",
            "x={{},{}}",
            "exists y. y in x",
        ]);
        assert_eq!(o.stdout, "2\n");
        let o = call(&["eval", "--mode", "tau", "--carrier", "vset:1", "x in x"]);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("unbound variable"));
    }
}
