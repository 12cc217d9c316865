//! Tree rewriting engine, derivation normalizer and budgeted prover for
//! strictly positive modal logics.
//!
//! Formulas built from verum, variables, conjunction and indexed diamonds
//! embed into ordered labelled trees; each supported logic (the base
//! system, its transitive extension, the reflection calculus, and every
//! system in between) becomes a set of tree rewrite rules. This crate
//! provides:
//!
//! * the formula language with parser and printer ([`formula`]);
//! * modal trees with the position/subtree/replacement algebra ([`tree`]);
//! * the two embeddings between formulas and trees ([`embed`]);
//! * the eight rewrite rules as validated instances ([`rules`]);
//! * derivations, the replay checker and the translation from sequent
//!   proofs ([`calculus`], [`sequent`]);
//! * reordering of derivations into normal shape with verified length
//!   bounds ([`normalize`]);
//! * a budgeted prover and the polynomial semantic oracle for the base
//!   system ([`prover`]).

pub mod calculus;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod formula;
pub mod normalize;
pub mod prover;
pub mod rules;
pub mod sequent;
pub mod tree;

pub use calculus::{check, check_trace, Derivation, System};
pub use embed::{to_formula, to_tree};
pub use formula::{big_and, Formula, Label, Sequent};
pub use rules::{applicable, apply, enumerate_applicable, lift, RuleClass, RuleInstance, RuleKind};
pub use tree::{big_sum, ModalTree, Position};
