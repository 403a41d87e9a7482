use thiserror::Error;

/// Errors produced by the kernel, the set constructions and the formula evaluator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A multiset with a repeated element somewhere below it was used where a set is required.
    /// `path` is the rendered chain of nodes from the input down to the first offender.
    #[error("not set-like: {} (repeated element {repeated})", path.join(" > "))]
    NotSetLike { path: Vec<String>, repeated: String },

    #[error("resource limit exceeded: {what} needs {needed}, limit is {limit}")]
    Resource {
        what: &'static str,
        needed: String,
        limit: usize,
    },

    #[error("no witness for {x} in the search fragment")]
    NoWitness { x: String },

    #[error("witness for {x} is not unique: {y1} and {y2}")]
    NotUnique { x: String, y1: String, y2: String },

    #[error("witness map keys do not match the elements of the domain")]
    DomainMismatch,

    #[error("witness {y} for {x} is not in the codomain")]
    CodomainViolation { x: String, y: String },

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("unknown predicate symbol `{0}`")]
    UnknownPredicate(String),

    #[error("predicate `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
