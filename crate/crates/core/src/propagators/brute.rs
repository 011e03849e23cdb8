//! Exhaustive reference propagation, for testing.

use super::parse::min_weight_parse_ids;
use crate::domains::{Filtered, VarDomains, ZBound, INFINITY};
use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::transforms::to_cnf;

/// Largest Cartesian product the oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 2_000_000;

/// Domain consistency by enumerating every assignment and parsing it.
pub fn brute_force_propagate(g: &Grammar, d: &VarDomains) -> Result<Filtered<VarDomains>> {
    Ok(brute_force_propagate_weighted(g, d, ZBound::unbounded())?.map(|(d, _)| d))
}

/// Weighted variant: an assignment is a support when its minimum
/// derivation weight is at most `ub(Z)`.
pub fn brute_force_propagate_weighted(
    g: &Grammar,
    d: &VarDomains,
    z: ZBound,
) -> Result<Filtered<(VarDomains, ZBound)>> {
    let n = d.len();
    if n == 0 {
        return Err(Error::EmptyScope);
    }
    let space = d.product_size();
    if space > BRUTE_FORCE_LIMIT {
        return Err(Error::SearchSpaceLimit(space, BRUTE_FORCE_LIMIT));
    }
    if z.is_empty() || space == 0 {
        return Ok(Filtered::Disentailed);
    }
    let cnf = if g.is_cnf() { g.clone() } else { to_cnf(g) };
    // per position: (alphabet value, grammar terminal if any)
    let choices: Vec<Vec<(usize, Option<usize>)>> = (0..n)
        .map(|i| d.values(i).map(|v| (v, cnf.terminal_id(d.alphabet().name(v)))).collect())
        .collect();

    let mut supported = vec![d.empty_set(); n];
    let mut best = INFINITY;
    let mut odometer = vec![0usize; n];
    let mut word = vec![0usize; n];
    'outer: loop {
        let mut known = true;
        for i in 0..n {
            match choices[i][odometer[i]].1 {
                Some(t) => word[i] = t,
                None => known = false,
            }
        }
        if known {
            if let Some(w) = min_weight_parse_ids(&cnf, &word) {
                if w <= z.ub {
                    best = best.min(w);
                    for i in 0..n {
                        supported[i].insert(choices[i][odometer[i]].0);
                    }
                }
            }
        }
        for i in (0..n).rev() {
            odometer[i] += 1;
            if odometer[i] < choices[i].len() {
                continue 'outer;
            }
            odometer[i] = 0;
        }
        break;
    }
    if best == INFINITY {
        return Ok(Filtered::Disentailed);
    }
    let mut out = d.clone();
    for (i, set) in supported.into_iter().enumerate() {
        out.replace(i, set);
    }
    Ok(Filtered::Consistent((out, ZBound::new(z.lb.max(best), z.ub))))
}
