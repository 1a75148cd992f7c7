//! Finite-relation termination toolkit.
//!
//! Everything here works over explicit finite relations on natural-number
//! states. The centerpiece is the transition-invariant termination check
//! (a relation is well-founded iff some finite union of well-founded
//! relations contains its transitive closure), together with the
//! combinatorics that sit underneath it: decreasing transitive sequences
//! and H-well-foundedness, pair colorings with homogeneous and weakly
//! homogeneous witnesses, weight functions and bounds, the fast-growing
//! hierarchy, k-large and m-dense sets, and the rank-based decomposition
//! of F_k-bounded relations into F_0-bounded parts.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * An edge `(x, y)` of a [`relation::FiniteRelation`] is read "x R y".
//! * A *decreasing sequence* follows edges forward: consecutive elements
//!   satisfy `(a_i, a_{i+1}) ∈ R`, and bounds are evaluated at the first
//!   element. A *computation* of a transition system runs the other way:
//!   `(s_{i+1}, s_i) ∈ R`, starting from an initial state.
//! * Lengths count elements, not steps.
//! * Every witness search breaks ties by picking the lexicographically
//!   least witness, so all outputs are reproducible bit for bit.

pub mod bounds;
pub mod certificate;
pub mod config;
pub mod error;
pub mod hclosure;
pub mod hierarchy;
pub mod invariant;
pub mod io;
pub mod largeness;
pub mod program;
pub mod ramsey;
pub mod relation;
pub mod report;

pub use config::{FghBudget, RunConfig};
pub use error::{Error, Result};
pub use relation::{FiniteRelation, TransitionSystem};
