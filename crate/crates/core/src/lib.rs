//! Proof kernel for multi-agent epistemic logic with common knowledge.

pub mod derived;
pub mod error;
pub mod files;
pub mod formula;
pub mod kernel;
pub mod meta;
pub mod oracle;
pub mod parse;
pub mod puzzles;
pub mod sexpr;
pub mod tactics;
pub mod taut;

pub use error::{Error, NodePath, Result};
pub use formula::{Agent, Atom, Domain, Formula, Group};
pub use kernel::{Basis, Proof, ProofNode, RuleTag, TecAxiom, Theorem, Theory};
pub use parse::{parse_formula, parse_group};
