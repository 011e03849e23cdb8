use std::collections::HashMap;

use super::cnf::eliminate_units;
use super::linear::is_linear_normal_form;
use super::trim::trim;
use crate::automaton::Nfa;
use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarBuilder, Symbol};

/// Interns `⟨F, A, F'⟩` nonterminals.
struct Triples<'g> {
    g: &'g Grammar,
    builder: GrammarBuilder,
    ids: HashMap<(usize, usize, usize), usize>,
}

impl<'g> Triples<'g> {
    fn new(g: &'g Grammar) -> Self {
        let mut builder = GrammarBuilder::new().weighted(g.is_weighted());
        for t in g.terminals() {
            builder.terminal(t);
        }
        Triples { g, builder, ids: HashMap::new() }
    }

    fn get(&mut self, from: usize, a: usize, to: usize) -> Symbol {
        if let Some(&id) = self.ids.get(&(from, a, to)) {
            return Symbol::N(id);
        }
        let name = format!("{}@{}.{}", self.g.nonterminal_name(a), from, to);
        let id = self.builder.fresh_nonterminal(&name);
        self.ids.insert((from, a, to), id);
        Symbol::N(id)
    }

    /// Wires a fresh start `Z -> ⟨q0, S, f⟩` for each accepting `f`, removes
    /// those chain productions and trims.
    fn finish(mut self, r: &Nfa) -> Grammar {
        let z = self.builder.fresh_nonterminal("Z");
        for &f in r.accepting() {
            let target = self.get(r.initial(), self.g.start(), f);
            self.builder.production(z, vec![target], 0);
        }
        let g = self.builder.build(z).expect("ids stay in range");
        trim(&eliminate_units(&g))
    }
}

/// `(F, F')` pairs per grammar terminal id.
fn transitions_by_terminal(g: &Grammar, r: &Nfa) -> Result<Vec<Vec<(usize, usize)>>> {
    let mut by_terminal = vec![Vec::new(); g.terminals().len()];
    let mut shared = false;
    for (q, a, q2) in r.transitions() {
        if let Some(t) = g.terminal_id(a) {
            by_terminal[t].push((*q, *q2));
            shared = true;
        }
    }
    if !shared && !r.transitions().is_empty() && !g.terminals().is_empty() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(by_terminal)
}

/// Intersection of a Chomsky-form grammar with an automaton. The result
/// generates `L(g) ∩ L(r)`, is again in Chomsky form, and is trimmed, so it
/// has no productions iff the intersection is empty. Triple productions
/// keep their source weights; the start wiring weighs 0.
pub fn triple_construction(g: &Grammar, r: &Nfa) -> Result<Grammar> {
    g.require_cnf()?;
    let trans = transitions_by_terminal(g, r)?;
    let q = r.states();
    let mut tr = Triples::new(g);
    for p in g.productions() {
        match *p.rhs.as_slice() {
            [Symbol::T(t)] => {
                for &(f, f2) in &trans[t] {
                    let lhs = tr.get(f, p.lhs, f2).nonterminal().unwrap();
                    tr.builder.production(lhs, vec![Symbol::T(t)], p.weight);
                }
            }
            [Symbol::N(b), Symbol::N(c)] => {
                for f in 0..q {
                    for f1 in 0..q {
                        for f2 in 0..q {
                            let lhs = tr.get(f, p.lhs, f2).nonterminal().unwrap();
                            let left = tr.get(f, b, f1);
                            let right = tr.get(f1, c, f2);
                            tr.builder.production(lhs, vec![left, right], p.weight);
                        }
                    }
                }
            }
            _ => unreachable!("checked CNF"),
        }
    }
    Ok(tr.finish(r))
}

/// Intersection of a grammar in linear normal form (`A -> aB | Ba | a`)
/// with an automaton. Only pairs of states appear per nonterminal, so the
/// output stays linear and grows with the square of the state count.
pub fn triple_construction_linear(g: &Grammar, r: &Nfa) -> Result<Grammar> {
    if !is_linear_normal_form(g) {
        return Err(Error::NotLinear("expected productions A -> aB | Ba | a".into()));
    }
    let trans = transitions_by_terminal(g, r)?;
    let q = r.states();
    let mut tr = Triples::new(g);
    for p in g.productions() {
        match *p.rhs.as_slice() {
            [Symbol::T(t)] => {
                for &(f, f2) in &trans[t] {
                    let lhs = tr.get(f, p.lhs, f2).nonterminal().unwrap();
                    tr.builder.production(lhs, vec![Symbol::T(t)], p.weight);
                }
            }
            [Symbol::T(t), Symbol::N(b)] => {
                for &(f, f1) in &trans[t] {
                    for f2 in 0..q {
                        let lhs = tr.get(f, p.lhs, f2).nonterminal().unwrap();
                        let inner = tr.get(f1, b, f2);
                        tr.builder.production(lhs, vec![Symbol::T(t), inner], p.weight);
                    }
                }
            }
            [Symbol::N(b), Symbol::T(t)] => {
                for &(f1, f2) in &trans[t] {
                    for f in 0..q {
                        let lhs = tr.get(f, p.lhs, f2).nonterminal().unwrap();
                        let inner = tr.get(f, b, f1);
                        tr.builder.production(lhs, vec![inner, Symbol::T(t)], p.weight);
                    }
                }
            }
            _ => unreachable!("checked normal form"),
        }
    }
    Ok(tr.finish(r))
}
