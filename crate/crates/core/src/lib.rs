//! Existential monadic second-order logic of one successor and co-Büchi automata.
//!
//! The crate compiles formulas of the existential fragment of S1S over `(∈, s)`
//! into co-Büchi automata over bit-vector alphabets, translates co-Büchi (and
//! Büchi) automata back into formulas, and decides language containment and
//! equivalence exactly on ultimately periodic words. An independent brute-force
//! evaluator ([`oracle`]) provides the ground truth used to validate the
//! compiler.
//!
//! Everything here is pure and allocation-only; file IO and the command-line
//! driver live in the `s1s-tool` crate.
#![cfg_attr(not(test), no_std)]
#![warn(missing_debug_implementations, rust_2018_idioms)]

extern crate alloc;

pub mod automaton;
pub mod compiler;
mod error;
pub mod formula;
pub mod oracle;
pub mod reverse;
pub mod word;

pub use automaton::{Acceptance, Cube, Edge, OmegaAutomaton};
pub use error::{Error, Result};
pub use formula::{Formula, Term, TrackSignature};
pub use word::{LassoWord, Symbol};
