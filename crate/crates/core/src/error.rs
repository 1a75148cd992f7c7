//! Error type shared by every module.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the toolkit.
///
/// Verdict-like outcomes ("this function is not a bound") are *not* errors;
/// operations return them in-band. Errors are reserved for violated
/// preconditions, exceeded caps and budgets, and malformed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance cap exceeded: {0}")]
    InstanceCapExceeded(String),

    #[error("state {0} is not in the relation's domain")]
    StateNotInDomain(u64),

    #[error("relation is not well-founded from {start}: cycle {cycle:?} is reachable")]
    NotWellFounded { start: u64, cycle: Vec<u64> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("arithmetic overflow: {0}")]
    ArithmeticOverflow(String),

    #[error("relation is not H-well-founded: state {0} is reflexive")]
    NotHWellFounded(u64),

    #[error("state function is partial: no value for state {0}")]
    PartialFunction(u64),

    #[error("function is not a bound: decreasing sequence {witness:?} is too long")]
    NotABound { witness: Vec<u64> },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("argument {0} is outside the tabulated domain")]
    OutsideTable(u64),

    #[error("the set is empty")]
    EmptySet,

    #[error("no value found within cap {0}")]
    NotFoundWithinCap(u64),

    #[error("input is not a strict partial order: {0}")]
    NotAPartialOrder(String),

    #[error("sequence is not a transitive decreasing sequence for the union")]
    NotTransitiveSequence,

    #[error("relation is not deterministic: state {0} has more than one successor")]
    NotDeterministic(u64),

    #[error("relation is not bounded at the required level: witness {witness:?}")]
    NotBounded { witness: Vec<u64> },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
