//! Plain CKY membership and minimum-weight parsing of single strings.

use crate::domains::INFINITY;
use crate::error::Result;
use crate::grammar::{Grammar, Symbol};

/// `s ∈ L(g)` for a Chomsky-form grammar. Unknown terminals simply make the
/// answer `false`.
pub fn cyk_parse<S: AsRef<str>>(g: &Grammar, s: &[S]) -> Result<bool> {
    Ok(min_weight_parse(g, s)?.is_some())
}

/// Minimum total production weight over the derivations of `s`, or `None`
/// when `s ∉ L(g)`.
pub fn min_weight_parse<S: AsRef<str>>(g: &Grammar, s: &[S]) -> Result<Option<u64>> {
    g.require_cnf()?;
    match g.encode_word(s) {
        Some(ids) => Ok(min_weight_parse_ids(g, &ids)),
        None => Ok(None),
    }
}

/// Same as [`min_weight_parse`] on terminal ids. `g` must be in CNF.
pub(crate) fn min_weight_parse_ids(g: &Grammar, word: &[usize]) -> Option<u64> {
    let n = word.len();
    if n == 0 {
        return None;
    }
    let k = g.nonterminals().len();
    // best[(i * n + (l - 1)) * k + a]
    let at = |i: usize, l: usize, a: usize| (i * n + (l - 1)) * k + a;
    let mut best = vec![INFINITY; n * n * k];
    for p in g.productions() {
        if let [Symbol::T(t)] = p.rhs.as_slice() {
            for (i, &w) in word.iter().enumerate() {
                if w == *t {
                    let c = &mut best[at(i, 1, p.lhs)];
                    *c = (*c).min(p.weight);
                }
            }
        }
    }
    for l in 2..=n {
        for i in 0..=n - l {
            for p in g.productions() {
                let [Symbol::N(b), Symbol::N(c)] = p.rhs.as_slice() else { continue };
                for split in 1..l {
                    let wb = best[at(i, split, *b)];
                    let wc = best[at(i + split, l - split, *c)];
                    if wb != INFINITY && wc != INFINITY {
                        let cell = &mut best[at(i, l, p.lhs)];
                        *cell = (*cell).min(p.weight + wb + wc);
                    }
                }
            }
        }
    }
    let w = best[at(0, n, g.start())];
    (w != INFINITY).then_some(w)
}
