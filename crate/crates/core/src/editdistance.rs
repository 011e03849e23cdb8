//! Edit distance as a weighted linear grammar constraint.
//!
//! `EditDistance(X, Y, N)` becomes `WeightedCFG(Z, N, G_ed)` over the
//! sequence `Z = X1..Xn # Yn..Y1`. In `G_ed` every production peels one
//! symbol off the left end (an `X` symbol) and/or the right end (a `Y`
//! symbol, since `Y` is reversed) around the single nonterminal `S`:
//! matches cost 0, substitutions, insertions and deletions cost 1, and
//! `S -> #` closes the derivation. The minimum derivation weight of
//! `x # reverse(y)` is therefore the unit-cost edit distance of `x` and `y`.

use std::sync::Arc;

use crate::automaton::Nfa;
use crate::domains::{Alphabet, VarDomains, ZBound};
use crate::error::{Error, Result};
use crate::grammar::{Grammar, GrammarBuilder, Symbol};
use crate::transforms::{to_linear_normal_form, triple_construction_linear};

pub const SENTINEL: &str = "#";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditInstance {
    /// Length of `X`.
    pub n: usize,
    /// Length of `Y`; always equal to `n`.
    pub m: usize,
    pub x_alphabet: Vec<String>,
    pub y_alphabet: Vec<String>,
    /// Upper bound on the edit distance.
    pub max_dist: u64,
}

impl EditInstance {
    pub fn new<S: AsRef<str>>(n: usize, x_alphabet: &[S], y_alphabet: &[S], max_dist: u64) -> Result<Self> {
        let x_alphabet: Vec<String> = x_alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        let y_alphabet: Vec<String> = y_alphabet.iter().map(|s| s.as_ref().to_string()).collect();
        check_sentinel(&x_alphabet)?;
        check_sentinel(&y_alphabet)?;
        Ok(EditInstance { n, m: n, x_alphabet, y_alphabet, max_dist })
    }

    /// Length of the encoded sequence, `2n + 1`.
    pub fn sequence_len(&self) -> usize {
        self.n + 1 + self.m
    }
}

fn check_sentinel<S: AsRef<str>>(alphabet: &[S]) -> Result<()> {
    if alphabet.iter().any(|a| a.as_ref() == SENTINEL) {
        return Err(Error::SentinelCollision(SENTINEL.to_string()));
    }
    Ok(())
}

/// Builds `G_ed`:
///
/// - `S -> d S d [0]` for `d` in the union of both alphabets,
/// - `S -> d1 S d2 [1]` for `d1` in the X alphabet, `d2` in the Y alphabet, `d1 != d2`,
/// - `S -> d S [1]` and `S -> S d [1]` for `d` in the union,
/// - `S -> # [0]`.
///
/// Insertions and deletions range over the union so that asymmetric
/// alphabets still give the exact edit distance.
pub fn build_edit_grammar<S: AsRef<str>>(x_alphabet: &[S], y_alphabet: &[S]) -> Result<Grammar> {
    check_sentinel(x_alphabet)?;
    check_sentinel(y_alphabet)?;
    let mut b = GrammarBuilder::new().weighted(true);
    let s = b.nonterminal("S");
    let union = Alphabet::new(x_alphabet.iter().chain(y_alphabet).map(|a| a.as_ref()));
    let sym = |b: &mut GrammarBuilder, a: &str| Symbol::T(b.terminal(a));
    for d in union.symbols() {
        let t = sym(&mut b, d);
        b.production(s, vec![t, Symbol::N(s), t], 0);
    }
    for d1 in x_alphabet {
        for d2 in y_alphabet {
            if d1.as_ref() != d2.as_ref() {
                let (t1, t2) = (sym(&mut b, d1.as_ref()), sym(&mut b, d2.as_ref()));
                b.production(s, vec![t1, Symbol::N(s), t2], 1);
            }
        }
    }
    for d in union.symbols() {
        let t = sym(&mut b, d);
        b.production(s, vec![t, Symbol::N(s)], 1);
        b.production(s, vec![Symbol::N(s), t], 1);
    }
    let hash = sym(&mut b, SENTINEL);
    b.production(s, vec![hash], 0);
    b.build(s)
}

/// `x # reverse(y)` as a word.
pub fn z_word<S: AsRef<str>>(x: &[S], y: &[S]) -> Vec<String> {
    x.iter()
        .map(|a| a.as_ref().to_string())
        .chain(std::iter::once(SENTINEL.to_string()))
        .chain(y.iter().rev().map(|a| a.as_ref().to_string()))
        .collect()
}

/// Lays out the `Z` sequence: the `X` domains, then `{#}`, then the `Y`
/// domains in reverse order. `Z`'s bound is `[0, N]`.
pub fn encode_edit_instance(inst: &EditInstance, dx: &VarDomains, dy: &VarDomains) -> Result<(VarDomains, ZBound)> {
    if dx.len() != inst.n {
        return Err(Error::LengthMismatch { expected: inst.n, got: dx.len() });
    }
    if dy.len() != inst.m {
        return Err(Error::LengthMismatch { expected: inst.m, got: dy.len() });
    }
    let mut alphabet = Alphabet::new(inst.x_alphabet.iter().chain(&inst.y_alphabet));
    for d in [dx, dy] {
        for a in d.alphabet().symbols() {
            if a == SENTINEL {
                return Err(Error::SentinelCollision(SENTINEL.into()));
            }
            alphabet.insert(a);
        }
    }
    alphabet.insert(SENTINEL);
    let mut values: Vec<Vec<&str>> = (0..dx.len()).map(|i| dx.symbols(i)).collect();
    values.push(vec![SENTINEL]);
    values.extend((0..dy.len()).rev().map(|i| dy.symbols(i)));
    let mut names: Vec<String> = dx.names().to_vec();
    names.push(SENTINEL.to_string());
    names.extend(dy.names().iter().rev().cloned());
    let z = VarDomains::from_values(Arc::new(alphabet), &values)?.with_names(names)?;
    Ok((z, ZBound::at_most(inst.max_dist)))
}

/// Automaton for `L(r1) # L(r2)^R`.
pub fn separator_automaton(r1: &Nfa, r2: &Nfa) -> Nfa {
    r1.concat_with_separator(SENTINEL, &r2.reverse())
}

/// `G_∧`: the weighted linear grammar generating the strings of `g_ed` of
/// the form `x # reverse(y)` with `x ∈ L(r1)` and `y ∈ L(r2)`, with the same
/// minimum derivation weights. Built by the linear triple construction on
/// the linear normal form of `g_ed`, then trimmed.
pub fn build_conjunction_grammar(r1: &Nfa, r2: &Nfa, g_ed: &Grammar) -> Result<Grammar> {
    for r in [r1, r2] {
        for a in r.alphabet() {
            if a == SENTINEL {
                return Err(Error::SentinelCollision(SENTINEL.into()));
            }
            if g_ed.terminal_id(a).is_none() {
                return Err(Error::AlphabetMismatch);
            }
        }
    }
    let lnf = to_linear_normal_form(g_ed)?;
    triple_construction_linear(&lnf, &separator_automaton(r1, r2))
}
