//! A symbolic algebra of countable linear orders.
//!
//! Terms built from finite chains, `w`, `w*`, `z` and dense shuffles denote
//! countable linear orders. The crate normalizes terms to a block-word
//! normal form and decides, on that fragment, isomorphism, embeddability,
//! convex embeddability and class-indexed convex embeddability, with
//! three-valued verdicts that carry machine-checkable certificates. On top
//! of the deciders sit a registry of downward-closed classes with a
//! closure-under-convex-sums checker, and the explicit order-theoretic
//! reduction maps together with their equivalence checks.
//!
//! The runnable examples under `examples/` walk through each capability;
//! the `linord` binary exposes the same operations as subcommands.

pub mod constructions;
pub mod corpus;
pub mod engine;
pub mod lclass;
pub mod ordinal;
pub mod term;
pub mod zcalc;

pub mod cli;

pub use engine::{FailReason, Verdict, Witness};
pub use lclass::ClassId;
pub use ordinal::Ordinal;
pub use term::{normalize, parse_class, parse_term, reverse, LabelSet, Term};
