//! Satisfiability-preserving preprocessing for clausal higher-order logic.

pub mod bce;
pub mod cc;
pub mod clause;
pub mod fuzz;
pub mod hlbe;
pub mod modelcheck;
pub mod parser;
pub mod pe;
pub mod pipeline;
pub mod printer;
pub mod qle;
pub mod sat;
pub mod signature;
pub mod term;
pub mod types;

pub use clause::{Clause, ClauseSet, Fresh, Literal, PredLit, Substitution};
pub use signature::Signature;
pub use term::{RawTerm, Term, TermNode, Var};
pub use types::{Name, Type, TypeScheme, TypeSubst};
