//! Constraint-driven program corpus generation and evaluation for the L2
//! language.
//!
//! The library is organized around an attributed context-free grammar
//! engine ([`grammar`]), a constrained random generator ([`generator`]),
//! the L2 language definition ([`l2`]), canonical text formats
//! ([`treefmt`]), sketch-based constant repair ([`sketch`]), and an
//! evaluation harness for externally proposed candidate programs
//! ([`harness`]).

pub mod generator;
pub mod grammar;
pub mod harness;
pub mod l2;
pub mod sketch;
pub mod treefmt;

pub use generator::{AstNode, CorpusRecord, GenConfig, GenLimits};
pub use grammar::{AttrValue, AttributeMap, Constraint, ConstraintSet, Grammar, Rewrite};
pub use l2::{IOExample, L2Language, L2Type, L2Value};
