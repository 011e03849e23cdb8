use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::trim::trim;
use crate::grammar::{name_fragment, Grammar, GrammarBuilder, Symbol};

/// Chomsky normal form by TERM, BIN and UNIT, followed by trimming.
///
/// Split productions put the original weight on the head and weight 0 on
/// the introduced tail productions; removing a chain `A -> B` adds the
/// cheapest chain weight to every production inherited from `B`. Hence the
/// minimum derivation weight of every string is unchanged.
pub fn to_cnf(g: &Grammar) -> Grammar {
    let lifted = lift_terminals(g, |p| p.rhs.len() >= 2);
    trim(&eliminate_units(&binarize(&lifted)))
}

/// Replaces every terminal `a` inside right-hand sides selected by `which`
/// with a nonterminal `Y_a` and adds `Y_a -> a` with weight 0.
pub(crate) fn lift_terminals(g: &Grammar, which: impl Fn(&crate::grammar::Production) -> bool) -> Grammar {
    let mut b = GrammarBuilder::with_symbols_of(g);
    let mut lifted: HashMap<usize, usize> = HashMap::new();
    let mut extra = Vec::new();
    let mut prods = Vec::new();
    for p in g.productions() {
        if !which(p) {
            prods.push((p.lhs, p.rhs.clone(), p.weight));
            continue;
        }
        let rhs = p
            .rhs
            .iter()
            .map(|s| match *s {
                Symbol::T(t) => {
                    let y = *lifted.entry(t).or_insert_with(|| {
                        let y = b.fresh_nonterminal(&format!("Y_{}", name_fragment(g.terminal_name(t))));
                        extra.push((y, vec![Symbol::T(t)], 0));
                        y
                    });
                    Symbol::N(y)
                }
                n => n,
            })
            .collect();
        prods.push((p.lhs, rhs, p.weight));
    }
    for (lhs, rhs, w) in prods.into_iter().chain(extra) {
        b.production(lhs, rhs, w);
    }
    b.build(g.start()).expect("ids stay in range")
}

/// `A -> X1 X2 .. Xk` with `k >= 3` becomes a right-branching chain of
/// binary productions.
fn binarize(g: &Grammar) -> Grammar {
    let mut b = GrammarBuilder::with_symbols_of(g);
    for p in g.productions() {
        if p.rhs.len() <= 2 {
            b.production(p.lhs, p.rhs.clone(), p.weight);
            continue;
        }
        let base = format!("{}_b", g.nonterminal_name(p.lhs));
        let mut cur = p.lhs;
        let mut weight = p.weight;
        let k = p.rhs.len();
        for sym in &p.rhs[..k - 2] {
            let next = b.fresh_nonterminal(&base);
            b.production(cur, vec![*sym, Symbol::N(next)], weight);
            weight = 0;
            cur = next;
        }
        b.production(cur, p.rhs[k - 2..].to_vec(), weight);
    }
    b.build(g.start()).expect("ids stay in range")
}

/// Removes chain productions `A -> B`. Every non-chain production `B -> γ`
/// is copied to each `A` that reaches `B` through chains, weighted by the
/// cheapest chain plus its own weight. Duplicates keep the minimum weight
/// and the position of their first occurrence.
pub(crate) fn eliminate_units(g: &Grammar) -> Grammar {
    let k = g.nonterminals().len();
    let mut chains: Vec<Vec<(usize, u64)>> = vec![Vec::new(); k];
    let mut any = false;
    for p in g.productions() {
        if let [Symbol::N(b)] = p.rhs.as_slice() {
            chains[p.lhs].push((*b, p.weight));
            any = true;
        }
    }
    if !any {
        return g.clone();
    }

    // inherits[b] = every (a, d) with a cheapest chain a =>* b of weight d
    let mut inherits: Vec<Vec<(usize, u64)>> = vec![Vec::new(); k];
    for a in 0..k {
        if chains[a].is_empty() {
            inherits[a].push((a, 0));
            continue;
        }
        let mut dist: HashMap<usize, u64> = HashMap::new();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, a)));
        while let Some(Reverse((d, x))) = heap.pop() {
            if dist.contains_key(&x) {
                continue;
            }
            dist.insert(x, d);
            for &(y, w) in &chains[x] {
                if !dist.contains_key(&y) {
                    heap.push(Reverse((d + w, y)));
                }
            }
        }
        for (b, d) in dist {
            inherits[b].push((a, d));
        }
    }
    for list in &mut inherits {
        list.sort_unstable();
    }

    let mut out: Vec<(usize, Vec<Symbol>, u64)> = Vec::new();
    let mut seen: HashMap<(usize, Vec<Symbol>), usize> = HashMap::new();
    for p in g.productions() {
        if matches!(p.rhs.as_slice(), [Symbol::N(_)]) {
            continue;
        }
        for &(a, d) in &inherits[p.lhs] {
            let w = d + p.weight;
            match seen.get(&(a, p.rhs.clone())) {
                Some(&i) => out[i].2 = out[i].2.min(w),
                None => {
                    seen.insert((a, p.rhs.clone()), out.len());
                    out.push((a, p.rhs.clone(), w));
                }
            }
        }
    }
    let mut b = GrammarBuilder::with_symbols_of(g);
    for (lhs, rhs, w) in out {
        b.production(lhs, rhs, w);
    }
    b.build(g.start()).expect("ids stay in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{enumerate_language, parse_grammar};

    #[test]
    fn term_and_bin() {
        let g = to_cnf(&parse_grammar("S -> a b").unwrap());
        assert!(g.is_cnf());
        assert_eq!(g.productions().len(), 3);
        let text = crate::grammar::serialize_grammar(&g);
        assert!(text.contains("S -> Y_a Y_b"), "{text}");
        assert!(text.contains("Y_a -> a"), "{text}");
        assert!(text.contains("Y_b -> b"), "{text}");
    }

    #[test]
    fn palindromic_center() {
        let g = parse_grammar("S -> a S a\nS -> b").unwrap();
        let c = to_cnf(&g);
        assert!(c.is_cnf());
        assert_eq!(enumerate_language(&c, 7).unwrap(), enumerate_language(&g, 7).unwrap());
    }

    #[test]
    fn chain_is_eliminated() {
        let c = to_cnf(&parse_grammar("S -> A\nA -> a").unwrap());
        assert_eq!(c.nonterminals(), ["S"]);
        assert_eq!(c.productions().len(), 1);
        assert_eq!(c.productions()[0].rhs, vec![Symbol::T(0)]);
    }

    #[test]
    fn chain_weights_add_up_and_minimum_wins() {
        let g = parse_grammar("S -> A [2]\nS -> B [0]\nB -> A [1]\nA -> a [5]\nS -> a [9]").unwrap();
        let c = to_cnf(&g);
        let s_a: Vec<_> = c.productions().iter().filter(|p| p.lhs == c.start()).collect();
        assert_eq!(s_a.len(), 1);
        assert_eq!(s_a[0].weight, 6);
    }

    #[test]
    fn cyclic_chains_terminate() {
        let g = parse_grammar("S -> A\nA -> S\nA -> a S\nS -> b").unwrap();
        let c = to_cnf(&g);
        assert_eq!(enumerate_language(&c, 5).unwrap(), enumerate_language(&g, 5).unwrap());
    }

    #[test]
    fn binarized_heads_carry_the_weight() {
        let g = parse_grammar("S -> a b c [3]").unwrap();
        let c = to_cnf(&g);
        let total: u64 = c.productions().iter().map(|p| p.weight).sum();
        assert_eq!(total, 3);
        assert_eq!(c.productions()[0].weight, 3);
    }
}
