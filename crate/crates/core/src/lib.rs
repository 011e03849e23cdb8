//! Propagators for grammar-based global constraints.
//!
//! The crate covers the context-free `Grammar` constraint (a CYK-table
//! propagator with a quadratic path for linear grammars), its weighted
//! variant, `Regular`, the grammar transformations these rely on, the two
//! reductions between grammar-constraint support and parsing, and an
//! encoding of edit distance as a weighted linear grammar. A small
//! backtracking solver and benchmark harness compare the monolithic
//! edit-distance-plus-regular propagator against its decomposition.

pub mod automaton;
pub mod bench;
pub mod domains;
pub mod editdistance;
pub mod error;
pub mod grammar;
pub mod propagators;
pub mod solver;
pub mod transforms;

pub use automaton::Nfa;
pub use domains::{Alphabet, Filtered, VarDomains, ZBound, INFINITY};
pub use error::{Error, Result};
pub use grammar::{classify, enumerate_language, parse_grammar, serialize_grammar, Grammar, GrammarClass, Symbol};
