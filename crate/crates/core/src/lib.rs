//! Decision procedure for intuitionistic propositional logic extended with
//! an identity connective `==` (formulas over `->`, `#` and `==`).
//!
//! [`prover::prove`] runs a terminating, restricted backward search in a
//! cut-free sequent calculus. When it fails, [`countermodel::countermodel`]
//! extracts a finite Kripke model refuting the formula from an open
//! branch. [`decision::decide`] combines both.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod calculus;
pub mod countermodel;
pub mod decision;
pub mod formula;
pub mod prover;
pub mod refute;
pub mod semantics;
pub mod syntax;

pub use calculus::{check_proof, Derivation, Goal, Rule, RuleInstance, Sequent, Step};
pub use countermodel::{countermodel, CounterModelBundle, CounterModelError};
pub use decision::{decide, Decision};
pub use formula::{Connective, Formula, FormulaClass};
pub use prover::{prove, Limits, SearchError, SearchStats, Verdict};
pub use semantics::{Frame, KripkeModel, ModelDefect, World, WorldSet};
pub use syntax::{parse_formula, parse_sequent, ParseError};
