//! Domain-consistency propagators and their single-string counterparts.

mod brute;
mod cyk;
mod parse;
mod regular;

pub use brute::{brute_force_propagate, brute_force_propagate_weighted, BRUTE_FORCE_LIMIT};
pub use cyk::{
    cyk_propagate, cyk_propagate_with, full_domains, weighted_propagate, CykPropagator, CykTable, FastPath,
};
pub use parse::{cyk_parse, min_weight_parse};
pub use regular::regular_propagate;
