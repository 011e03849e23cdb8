//! Oracles and random generators shared by the integration tests. Nothing
//! here goes through the library's parsing or normal-form code except
//! `parse_grammar` for building inputs.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gramprop::{parse_grammar, Alphabet, Grammar, Symbol, VarDomains};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const INF: u64 = u64::MAX;

pub fn chars(s: &str) -> Vec<String> {
    s.chars().map(String::from).collect()
}

/// Unit-cost edit distance by the textbook dynamic program.
pub fn wagner_fischer<S: PartialEq>(x: &[S], y: &[S]) -> u64 {
    let mut prev: Vec<u64> = (0..=y.len() as u64).collect();
    for (i, a) in x.iter().enumerate() {
        let mut cur = vec![i as u64 + 1; y.len() + 1];
        for (j, b) in y.iter().enumerate() {
            let sub = prev[j] + u64::from(a != b);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[y.len()]
}

/// Minimum derivation weight of `word` in any ε-free grammar, by iterating
/// span costs to a fixpoint (handles unit cycles and long right-hand sides).
pub fn oracle_min_weight<S: AsRef<str>>(g: &Grammar, word: &[S]) -> Option<u64> {
    let n = word.len();
    if n == 0 {
        return None;
    }
    let mut ids = Vec::with_capacity(n);
    for a in word {
        ids.push(g.terminals().iter().position(|t| t == a.as_ref())?);
    }
    let k = g.nonterminals().len();
    // best[a][i][j] for the span i..j
    let mut best = vec![vec![vec![INF; n + 1]; n + 1]; k];

    fn seq(rhs: &[Symbol], i: usize, j: usize, ids: &[usize], best: &[Vec<Vec<u64>>]) -> u64 {
        let Some((first, rest)) = rhs.split_first() else {
            return if i == j { 0 } else { INF };
        };
        let mut out = INF;
        // every symbol covers at least one position
        let last = j.saturating_sub(rest.len());
        for m in i + 1..=last {
            let c = match *first {
                Symbol::T(t) => {
                    if m == i + 1 && ids[i] == t {
                        0
                    } else {
                        INF
                    }
                }
                Symbol::N(b) => best[b][i][m],
            };
            if c == INF {
                continue;
            }
            let r = seq(rest, m, j, ids, best);
            if r != INF {
                out = out.min(c + r);
            }
        }
        out
    }

    loop {
        let mut changed = false;
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                for p in g.productions() {
                    if p.rhs.len() > len {
                        continue;
                    }
                    let c = seq(&p.rhs, i, j, &ids, &best);
                    if c != INF && c + p.weight < best[p.lhs][i][j] {
                        best[p.lhs][i][j] = c + p.weight;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let w = best[g.start()][0][n];
    (w != INF).then_some(w)
}

/// Exhaustive weighted domain consistency on top of [`oracle_min_weight`]:
/// per-position supported values and the cheapest supported weight, or
/// `None` when nothing is supported.
pub fn oracle_propagate(g: &Grammar, d: &VarDomains, ub: u64) -> Option<(Vec<BTreeSet<String>>, u64)> {
    let n = d.len();
    let choices: Vec<Vec<String>> = (0..n).map(|i| d.symbols(i).into_iter().map(String::from).collect()).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return None;
    }
    let mut supported = vec![BTreeSet::new(); n];
    let mut best = INF;
    let mut idx = vec![0usize; n];
    loop {
        let word: Vec<&String> = (0..n).map(|i| &choices[i][idx[i]]).collect();
        if let Some(w) = oracle_min_weight(g, &word) {
            if w <= ub {
                best = best.min(w);
                for (i, a) in word.iter().enumerate() {
                    supported[i].insert((*a).clone());
                }
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return (best != INF).then_some((supported, best));
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Every word over `alphabet` with length in `1..=max_len`.
pub fn all_words(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.to_string());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn domain_sets(d: &VarDomains) -> Vec<BTreeSet<String>> {
    (0..d.len()).map(|i| d.symbols(i).into_iter().map(String::from).collect()).collect()
}

const NONTERMINALS: [&str; 6] = ["S", "A", "B", "C", "D", "E"];
const TERMINALS: [&str; 3] = ["a", "b", "c"];

pub struct Shape {
    pub nonterminals: usize,
    pub terminals: usize,
    pub productions: usize,
    pub weighted: bool,
}

impl Shape {
    pub fn random(rng: &mut ChaCha8Rng, max_productions: usize) -> Shape {
        Shape {
            nonterminals: rng.gen_range(1..=6),
            terminals: rng.gen_range(1..=3),
            productions: rng.gen_range(1..=max_productions),
            weighted: rng.gen_bool(0.5),
        }
    }

    pub fn alphabet(&self) -> Vec<&'static str> {
        TERMINALS[..self.terminals].to_vec()
    }

    fn nt(&self, rng: &mut ChaCha8Rng) -> &'static str {
        NONTERMINALS[rng.gen_range(0..self.nonterminals)]
    }

    fn t(&self, rng: &mut ChaCha8Rng) -> &'static str {
        TERMINALS[rng.gen_range(0..self.terminals)]
    }

    /// Assembles production lines; the first one always has `S` on the left.
    fn text(&self, rng: &mut ChaCha8Rng, mut rhs: impl FnMut(&mut ChaCha8Rng) -> Vec<&'static str>) -> String {
        let mut lines = Vec::new();
        for k in 0..self.productions {
            let lhs = if k == 0 { "S" } else { self.nt(rng) };
            let body = rhs(rng).join(" ");
            let w = if self.weighted { format!(" [{}]", rng.gen_range(0..4)) } else { String::new() };
            lines.push(format!("{lhs} -> {body}{w}"));
        }
        lines.join("\n")
    }
}

/// `A -> B C` or `A -> a`.
pub fn random_cnf(rng: &mut ChaCha8Rng, shape: &Shape) -> Grammar {
    let text = shape.text(rng, |rng| {
        if rng.gen_bool(0.45) {
            vec![shape.t(rng)]
        } else {
            vec![shape.nt(rng), shape.nt(rng)]
        }
    });
    parse_grammar(&text).expect("generated grammar parses")
}

/// `A -> u B v` (`|u|, |v| <= 2`, unit productions allowed) or `A -> w`.
pub fn random_linear(rng: &mut ChaCha8Rng, shape: &Shape) -> Grammar {
    let text = shape.text(rng, |rng| {
        if rng.gen_bool(0.35) {
            (0..rng.gen_range(1..=3)).map(|_| shape.t(rng)).collect()
        } else {
            let mut v: Vec<&str> = (0..rng.gen_range(0..=2)).map(|_| shape.t(rng)).collect();
            v.push(shape.nt(rng));
            v.extend((0..rng.gen_range(0..=2)).map(|_| shape.t(rng)));
            v
        }
    });
    parse_grammar(&text).expect("generated grammar parses")
}

/// `A -> a B1 .. Bk` with `k <= 2`.
pub fn random_greibach(rng: &mut ChaCha8Rng, shape: &Shape) -> Grammar {
    let text = shape.text(rng, |rng| {
        let mut v = vec![shape.t(rng)];
        v.extend((0..rng.gen_range(0..=2)).map(|_| shape.nt(rng)));
        v
    });
    parse_grammar(&text).expect("generated grammar parses")
}

/// `A -> a α` with up to two further symbols of either kind.
pub fn random_leading_terminal(rng: &mut ChaCha8Rng, shape: &Shape) -> Grammar {
    let text = shape.text(rng, |rng| {
        let mut v = vec![shape.t(rng)];
        for _ in 0..rng.gen_range(0..=2) {
            v.push(if rng.gen_bool(0.5) { shape.t(rng) } else { shape.nt(rng) });
        }
        v
    });
    parse_grammar(&text).expect("generated grammar parses")
}

/// Any ε-free grammar with right-hand sides of length 1 to 3.
pub fn random_general(rng: &mut ChaCha8Rng, shape: &Shape) -> Grammar {
    let text = shape.text(rng, |rng| {
        (0..rng.gen_range(1..=3))
            .map(|_| if rng.gen_bool(0.5) { shape.t(rng) } else { shape.nt(rng) })
            .collect()
    });
    parse_grammar(&text).expect("generated grammar parses")
}

/// `n` non-empty random subsets of `alphabet`.
pub fn random_domains(rng: &mut ChaCha8Rng, alphabet: &[&str], n: usize) -> VarDomains {
    let values: Vec<Vec<&str>> = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=alphabet.len());
            let mut v: Vec<&str> = alphabet.choose_multiple(rng, k).copied().collect();
            v.sort_unstable();
            v
        })
        .collect();
    VarDomains::from_values(Arc::new(Alphabet::new(alphabet.iter().copied())), &values).expect("values in alphabet")
}

/// A random derivation from the start symbol, or `None` if it exceeds
/// `max_len` terminals or `budget` expansions.
pub fn random_word(rng: &mut ChaCha8Rng, g: &Grammar, max_len: usize) -> Option<Vec<String>> {
    let by_lhs = g.by_lhs();
    let mut form = vec![Symbol::N(g.start())];
    for _ in 0..64 {
        let Some(pos) = form.iter().position(|s| s.is_nonterminal()) else {
            return Some(form.iter().map(|s| g.symbol_name(*s).to_string()).collect());
        };
        let Symbol::N(a) = form[pos] else { unreachable!() };
        let &pi = by_lhs[a].choose(rng)?;
        form.splice(pos..=pos, g.productions()[pi].rhs.iter().copied());
        if form.len() > max_len {
            return None;
        }
    }
    None
}
