use crate::grammar::{Grammar, Symbol};

/// Nonterminals that derive at least one terminal string. Linear in `|G|`:
/// each production waits on a counter of its not-yet-productive
/// nonterminal occurrences.
pub fn productive_nonterminals(g: &Grammar) -> Vec<bool> {
    let k = g.nonterminals().len();
    let prods = g.productions();
    let mut pending: Vec<usize> = prods.iter().map(|p| p.nonterminal_count()).collect();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); k];
    for p in prods {
        for s in &p.rhs {
            if let Symbol::N(b) = *s {
                occurrences[b].push(p.index);
            }
        }
    }
    let mut productive = vec![false; k];
    let mut work = Vec::new();
    for p in prods {
        if pending[p.index] == 0 && !productive[p.lhs] {
            productive[p.lhs] = true;
            work.push(p.lhs);
        }
    }
    while let Some(b) = work.pop() {
        for &pi in &occurrences[b] {
            pending[pi] -= 1;
            let lhs = prods[pi].lhs;
            if pending[pi] == 0 && !productive[lhs] {
                productive[lhs] = true;
                work.push(lhs);
            }
        }
    }
    productive
}

/// `L(g) = ∅`.
pub fn is_empty(g: &Grammar) -> bool {
    !productive_nonterminals(g)[g.start()]
}

/// Drops nonproductive and unreachable nonterminals with their
/// productions. The terminal set is left untouched; the start symbol stays
/// declared even when the language is empty.
pub fn trim(g: &Grammar) -> Grammar {
    let productive = productive_nonterminals(g);
    let by_lhs = g.by_lhs();
    let mut reachable = vec![false; g.nonterminals().len()];
    if productive[g.start()] {
        reachable[g.start()] = true;
        let mut stack = vec![g.start()];
        while let Some(a) = stack.pop() {
            for &pi in &by_lhs[a] {
                let p = &g.productions()[pi];
                if p.rhs.iter().any(|s| matches!(s, Symbol::N(b) if !productive[*b])) {
                    continue;
                }
                for s in &p.rhs {
                    if let Symbol::N(b) = *s {
                        if !reachable[b] {
                            reachable[b] = true;
                            stack.push(b);
                        }
                    }
                }
            }
        }
    }
    let keep: Vec<bool> = productive.iter().zip(&reachable).map(|(p, r)| *p && *r).collect();
    g.restrict(&keep)
}
