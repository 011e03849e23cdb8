//! CYK-table propagation for (weighted) context-free grammar constraints.
//!
//! The bottom-up pass computes, for every substring `X_i..X_{i+l-1}` and
//! nonterminal `A`, the minimum weight of a derivation from `A` of some
//! string inside the domains (the inside weight; finite iff derivable). The
//! top-down pass computes the cheapest way to complete such a cell into a
//! derivation of the whole sequence from the start symbol (the outside
//! weight; finite iff reachable). A value survives at position `i` when
//! some `A -> a` at `(i, 1)` has `outside + w(A -> a) <= ub(Z)`.
//!
//! A binary rule whose left (right) child only ever derives a single
//! terminal can only split after the first (before the last) position.
//! Grammars obtained from linear grammars consist of such rules only, which
//! makes every cell cost `O(|G|)` and the whole pass `O(n²|G|)`; other
//! rules loop over all `l - 1` split points.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::domains::{Alphabet, Filtered, VarDomains, ZBound, INFINITY};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Symbol};

/// How binary rules choose their split points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FastPath {
    /// Fixed splits wherever a child spans exactly one position.
    #[default]
    Auto,
    /// Like `Auto`, but every rule must have a fixed split.
    On,
    /// Always loop over every split point.
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Split {
    /// Left child spans one position.
    First,
    /// Right child spans one position.
    Last,
    Any,
}

#[derive(Debug, Clone)]
struct Rule {
    lhs: usize,
    left: usize,
    right: usize,
    weight: u64,
    split: Split,
}

/// A Chomsky-form grammar compiled for repeated propagation.
#[derive(Debug, Clone)]
pub struct CykPropagator {
    nonterminals: usize,
    start: usize,
    rules: Vec<Rule>,
    rules_by_lhs: Vec<Vec<usize>>,
    /// `(A, w)` for every `A -> t`, indexed by grammar terminal.
    lexical: Vec<Vec<(usize, u64)>>,
    terminals: Vec<String>,
}

impl CykPropagator {
    pub fn new(g: &Grammar, mode: FastPath) -> Result<Self> {
        g.require_cnf()?;
        let k = g.nonterminals().len();
        let mut lexical = vec![Vec::new(); g.terminals().len()];
        let mut single = vec![true; k];
        for p in g.productions() {
            match *p.rhs.as_slice() {
                [Symbol::T(t)] => lexical[t].push((p.lhs, p.weight)),
                _ => single[p.lhs] = false,
            }
        }
        let mut rules = Vec::new();
        let mut rules_by_lhs = vec![Vec::new(); k];
        for p in g.productions() {
            let [Symbol::N(left), Symbol::N(right)] = *p.rhs.as_slice() else { continue };
            let split = match mode {
                FastPath::Off => Split::Any,
                _ if single[left] => Split::First,
                _ if single[right] => Split::Last,
                FastPath::On => return Err(Error::FastPathUnavailable(g.display_production(p))),
                FastPath::Auto => Split::Any,
            };
            rules_by_lhs[p.lhs].push(rules.len());
            rules.push(Rule { lhs: p.lhs, left, right, weight: p.weight, split });
        }
        Ok(CykPropagator {
            nonterminals: k,
            start: g.start(),
            rules,
            rules_by_lhs,
            lexical,
            terminals: g.terminals().to_vec(),
        })
    }

    /// True when no rule needs a split-point loop.
    pub fn uses_fast_path(&self) -> bool {
        self.rules.iter().all(|r| r.split != Split::Any)
    }

    /// Alphabet value -> grammar terminal.
    fn terminal_map(&self, alphabet: &Alphabet) -> Vec<Option<usize>> {
        (0..alphabet.len())
            .map(|v| self.terminals.iter().position(|t| t == alphabet.name(v)))
            .collect()
    }

    /// Fills both passes of the table. `ub` bounds nothing here; it only
    /// matters when reading supports.
    pub fn table(&self, d: &VarDomains) -> Result<CykTable> {
        let n = d.len();
        if n == 0 {
            return Err(Error::EmptyScope);
        }
        let k = self.nonterminals;
        let map = self.terminal_map(d.alphabet());
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for l in 1..=n {
            offsets.push(offsets[l - 1] + (n - l + 1));
        }
        let cells = offsets[n];
        let mut t = CykTable {
            n,
            k,
            start: self.start,
            offsets,
            inside: vec![INFINITY; cells * k],
            outside: vec![INFINITY; cells * k],
            work: 0,
        };

        for i in 0..n {
            let base = t.slot(i, 1);
            for v in d.values(i) {
                let Some(term) = map[v] else { continue };
                for &(a, w) in &self.lexical[term] {
                    let c = &mut t.inside[base + a];
                    *c = (*c).min(w);
                }
            }
        }

        for l in 2..=n {
            for i in 0..=n - l {
                let here = t.slot(i, l);
                for r in &self.rules {
                    let (lo, hi) = match r.split {
                        Split::First => (1, 2),
                        Split::Last => (l - 1, l),
                        Split::Any => (1, l),
                    };
                    for s in lo..hi {
                        t.work += 1;
                        let wl = t.inside[t.slot(i, s) + r.left];
                        if wl == INFINITY {
                            continue;
                        }
                        let wr = t.inside[t.slot(i + s, l - s) + r.right];
                        if wr == INFINITY {
                            continue;
                        }
                        let c = &mut t.inside[here + r.lhs];
                        *c = (*c).min(r.weight + wl + wr);
                    }
                }
            }
        }

        let root = t.slot(0, n) + self.start;
        if t.inside[root] != INFINITY {
            t.outside[root] = 0;
        }
        for l in (2..=n).rev() {
            for i in 0..=n - l {
                let here = t.slot(i, l);
                for a in 0..k {
                    let oa = t.outside[here + a];
                    if oa == INFINITY {
                        continue;
                    }
                    for &ri in &self.rules_by_lhs[a] {
                        let r = &self.rules[ri];
                        let (lo, hi) = match r.split {
                            Split::First => (1, 2),
                            Split::Last => (l - 1, l),
                            Split::Any => (1, l),
                        };
                        for s in lo..hi {
                            t.work += 1;
                            let ls = t.slot(i, s) + r.left;
                            let rs = t.slot(i + s, l - s) + r.right;
                            let (wl, wr) = (t.inside[ls], t.inside[rs]);
                            if wl == INFINITY || wr == INFINITY {
                                continue;
                            }
                            t.outside[ls] = t.outside[ls].min(oa + r.weight + wr);
                            t.outside[rs] = t.outside[rs].min(oa + r.weight + wl);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    /// Domain-consistent filtering of `Grammar(X, G)`.
    pub fn propagate(&self, d: &VarDomains) -> Result<Filtered<VarDomains>> {
        Ok(self.propagate_weighted(d, ZBound::unbounded())?.map(|(d, _)| d))
    }

    /// Domain-consistent filtering of `WeightedCFG(X, Z, G)`: strings must
    /// have a derivation of weight at most `ub(Z)`. `lb(Z)` is raised to the
    /// cheapest supported derivation.
    pub fn propagate_weighted(&self, d: &VarDomains, z: ZBound) -> Result<Filtered<(VarDomains, ZBound)>> {
        if z.is_empty() {
            return Ok(Filtered::Disentailed);
        }
        let t = self.table(d)?;
        let best = t.min_weight();
        if best == INFINITY || best > z.ub {
            return Ok(Filtered::Disentailed);
        }
        let map = self.terminal_map(d.alphabet());
        let mut out = d.clone();
        for i in 0..d.len() {
            let base = t.slot(i, 1);
            let mut keep = FixedBitSet::with_capacity(d.alphabet().len());
            for v in d.values(i) {
                let Some(term) = map[v] else { continue };
                let supported = self.lexical[term].iter().any(|&(a, w)| {
                    let o = t.outside[base + a];
                    o != INFINITY && o + w <= z.ub
                });
                if supported {
                    keep.insert(v);
                }
            }
            if keep.is_clear() {
                return Ok(Filtered::Disentailed);
            }
            out.replace(i, keep);
        }
        Ok(Filtered::Consistent((out, ZBound::new(z.lb.max(best), z.ub))))
    }
}

/// Inside and outside weights for every `(nonterminal, start, length)`.
/// Public accessors take 1-based start positions.
#[derive(Debug, Clone)]
pub struct CykTable {
    n: usize,
    k: usize,
    start: usize,
    offsets: Vec<usize>,
    inside: Vec<u64>,
    outside: Vec<u64>,
    work: u64,
}

impl CykTable {
    fn slot(&self, i: usize, l: usize) -> usize {
        (self.offsets[l - 1] + i) * self.k
    }

    fn check(&self, a: usize, i: usize, l: usize) -> usize {
        assert!(a < self.k && i >= 1 && l >= 1 && i - 1 + l <= self.n, "cell ({a}, {i}, {l}) out of range");
        self.slot(i - 1, l) + a
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn nonterminals(&self) -> usize {
        self.k
    }

    pub fn inside(&self, a: usize, i: usize, l: usize) -> u64 {
        self.inside[self.check(a, i, l)]
    }

    pub fn outside(&self, a: usize, i: usize, l: usize) -> u64 {
        self.outside[self.check(a, i, l)]
    }

    pub fn derivable(&self, a: usize, i: usize, l: usize) -> bool {
        self.inside(a, i, l) != INFINITY
    }

    pub fn reachable(&self, a: usize, i: usize, l: usize) -> bool {
        self.outside(a, i, l) != INFINITY
    }

    /// Minimum derivation weight of a full supported string, `INFINITY` if none.
    pub fn min_weight(&self) -> u64 {
        self.inside[self.slot(0, self.n) + self.start]
    }

    /// Number of (rule, split point) combinations examined by both passes.
    pub fn work(&self) -> u64 {
        self.work
    }
}

/// Domain-consistent filtering of `Grammar(X, g)`; `g` must be in CNF.
pub fn cyk_propagate(g: &Grammar, d: &VarDomains) -> Result<Filtered<VarDomains>> {
    cyk_propagate_with(g, d, FastPath::Auto)
}

pub fn cyk_propagate_with(g: &Grammar, d: &VarDomains, mode: FastPath) -> Result<Filtered<VarDomains>> {
    CykPropagator::new(g, mode)?.propagate(d)
}

/// Domain-consistent filtering of `WeightedCFG(X, Z, g)`; `g` must be in CNF.
pub fn weighted_propagate(g: &Grammar, d: &VarDomains, z: ZBound) -> Result<Filtered<(VarDomains, ZBound)>> {
    CykPropagator::new(g, FastPath::Auto)?.propagate_weighted(d, z)
}

/// Convenience for tests and tools: full domains over `alphabet`.
pub fn full_domains(alphabet: &[&str], n: usize) -> VarDomains {
    VarDomains::full(Arc::new(Alphabet::new(alphabet)), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::transforms::{propagator_cnf, to_cnf};

    fn parens() -> Grammar {
        to_cnf(&parse_grammar("S -> S S\nS -> '(' S ')'\nS -> '(' ')'").unwrap())
    }

    #[test]
    fn parens_four_positions() {
        let d = full_domains(&["(", ")"], 4);
        let out = cyk_propagate(&parens(), &d).unwrap().consistent().unwrap();
        assert_eq!(out.symbols(0), ["("]);
        assert_eq!(out.symbols(1), ["(", ")"]);
        assert_eq!(out.symbols(2), ["(", ")"]);
        assert_eq!(out.symbols(3), [")"]);
    }

    #[test]
    fn unique_support_and_failure() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        let d = full_domains(&["a", "b"], 2);
        let out = cyk_propagate(&g, &d).unwrap().consistent().unwrap();
        assert_eq!(out.symbols(0), ["a"]);
        assert_eq!(out.symbols(1), ["b"]);
        let d = VarDomains::from_lists(&[vec!["b"], vec!["b"]]);
        assert!(cyk_propagate(&g, &d).unwrap().is_disentailed());
    }

    #[test]
    fn empty_scope_rejected() {
        let g = parse_grammar("S -> a").unwrap();
        assert_eq!(cyk_propagate(&g, &full_domains(&["a"], 0)), Err(Error::EmptyScope));
    }

    #[test]
    fn fast_path_modes() {
        let lin = propagator_cnf(&parse_grammar("S -> a S b\nS -> c").unwrap());
        assert!(CykPropagator::new(&lin, FastPath::Auto).unwrap().uses_fast_path());
        assert!(!CykPropagator::new(&lin, FastPath::Off).unwrap().uses_fast_path());
        assert!(matches!(CykPropagator::new(&parens(), FastPath::On), Err(Error::FastPathUnavailable(_))));
    }

    #[test]
    fn table_flags() {
        let g = parse_grammar("S -> A B\nA -> a\nB -> b").unwrap();
        let d = full_domains(&["a", "b"], 2);
        let t = CykPropagator::new(&g, FastPath::Auto).unwrap().table(&d).unwrap();
        let (s, a, b) = (0, 1, 2);
        assert!(t.derivable(s, 1, 2) && t.reachable(s, 1, 2));
        assert!(t.derivable(a, 2, 1) && !t.reachable(a, 2, 1));
        assert!(t.reachable(a, 1, 1) && t.reachable(b, 2, 1));
        assert_eq!(t.min_weight(), 0);
    }

    #[test]
    fn weighted_bound_prunes() {
        let g = parse_grammar("S -> A B [0]\nA -> a [0]\nA -> b [5]\nB -> b [1]").unwrap();
        let d = full_domains(&["a", "b"], 2);
        let (out, z) = weighted_propagate(&g, &d, ZBound::at_most(3)).unwrap().consistent().unwrap();
        assert_eq!(out.symbols(0), ["a"]);
        assert_eq!(z, ZBound::new(1, 3));
        let (out, _) = weighted_propagate(&g, &d, ZBound::at_most(6)).unwrap().consistent().unwrap();
        assert_eq!(out.symbols(0), ["a", "b"]);
        assert!(weighted_propagate(&g, &d, ZBound::at_most(0)).unwrap().is_disentailed());
        assert!(weighted_propagate(&g, &d, ZBound::new(4, 3)).unwrap().is_disentailed());
    }
}
