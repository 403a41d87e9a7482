//! Iterative multisets and iterative sets as hash-consed finite trees, with the set-theoretic
//! constructions on sets, bisimilarity between the two, and a two-valued and a counting
//! interpretation of first-order formulas over finite carriers.

pub mod bisim;
pub mod cli;
pub mod error;
pub mod fol;
pub mod gen;
pub mod literal;
pub mod mset;
pub mod ops;
pub mod selftest;
pub mod vset;

pub use bisim::BisimReport;
pub use error::{Error, Result};
pub use literal::{MsetJson, NodeJson};
pub use mset::{Limits, MNode, MsetId, Multiplicity, Store};
pub use ops::{SearchSpace, Witness, WitnessMap};
pub use vset::VsetId;
