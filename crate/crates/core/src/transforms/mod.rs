//! Normal forms, trimming, intersection with automata, and the reductions.

mod cnf;
mod linear;
mod reductions;
mod trim;
mod triple;

pub use cnf::to_cnf;
pub use linear::{is_linear_normal_form, linear_to_cnf, propagator_cnf, to_linear_normal_form};
pub use reductions::{
    bitmap_reduction, simple_grammar_reduction, BitmapReduction, PairedTerminal, SimpleReduction,
};
pub use trim::{is_empty, productive_nonterminals, trim};
pub use triple::{triple_construction, triple_construction_linear};
