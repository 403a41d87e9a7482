//! First-order formulas over `∈` and `=`, their parser, and their evaluation over finite
//! carriers.

pub mod axioms;
pub mod eval;
pub mod formula;
pub mod parser;

pub use axioms::{check_axiom, Axiom, AxiomReport, Mode};
pub use eval::{Carrier, CarrierKind, Membership, Model, Predicates, SigmaCount, Valuation};
pub use formula::Formula;
pub use parser::parse_formula;
