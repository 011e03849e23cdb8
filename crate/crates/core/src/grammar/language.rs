use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{Grammar, Symbol};
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_LENGTH: usize = 12;

/// All strings of `L(g)` with at most `max_len` terminals, found by
/// breadth-first leftmost derivation. Every symbol of an ε-free sentential
/// form yields at least one terminal, so forms longer than `max_len` are
/// dropped and the search terminates.
pub fn enumerate_language(g: &Grammar, max_len: usize) -> Result<BTreeSet<Vec<String>>> {
    if max_len > MAX_ENUMERATION_LENGTH {
        return Err(Error::EnumerationLimit(max_len, MAX_ENUMERATION_LENGTH));
    }
    let by_lhs = g.by_lhs();
    let mut words = BTreeSet::new();
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    let mut queue = VecDeque::new();
    let start = vec![Symbol::N(g.start())];
    seen.insert(start.clone());
    queue.push_back(start);

    while let Some(form) = queue.pop_front() {
        let Some(pos) = form.iter().position(|s| s.is_nonterminal()) else {
            words.insert(form.iter().map(|s| g.symbol_name(*s).to_string()).collect());
            continue;
        };
        let Symbol::N(a) = form[pos] else { unreachable!() };
        for &pi in &by_lhs[a] {
            let rhs = &g.productions()[pi].rhs;
            if form.len() - 1 + rhs.len() > max_len {
                continue;
            }
            let mut next = Vec::with_capacity(form.len() - 1 + rhs.len());
            next.extend_from_slice(&form[..pos]);
            next.extend_from_slice(rhs);
            next.extend_from_slice(&form[pos + 1..]);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(words)
}
