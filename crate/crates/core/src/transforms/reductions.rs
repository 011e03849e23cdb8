//! The two reductions between grammar-constraint support and membership.
//!
//! [`simple_grammar_reduction`] turns membership of a string in a Greibach
//! grammar into support of a constraint over a *simple* grammar, so simple
//! grammars are no easier to propagate than general ones.
//! [`bitmap_reduction`] goes the other way: support of a constraint becomes
//! membership of a bitmap string in a grammar over `{0, 1}`.

use std::sync::Arc;

use crate::domains::{Alphabet, VarDomains};
use crate::error::{Error, Result};
use crate::grammar::{classify, Grammar, GrammarBuilder, Symbol};

/// A terminal paired with the (1-based) index of the production that
/// consumes it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PairedTerminal {
    pub base: String,
    pub production: usize,
}

impl PairedTerminal {
    pub fn name(&self) -> String {
        format!("({},{})", self.base, self.production)
    }
}

#[derive(Debug, Clone)]
pub struct SimpleReduction {
    pub grammar: Grammar,
    pub domains: VarDomains,
    /// `pairs[t]` describes terminal `t` of `grammar`.
    pub pairs: Vec<PairedTerminal>,
}

/// Builds the simple grammar `G'` in which the `j`-th production `A -> aα`
/// of `g` becomes `A -> (a,j)α`, and domains `D(Xi) = {(a,j) : a = s_i}`.
pub fn simple_grammar_reduction<S: AsRef<str>>(g: &Grammar, s: &[S]) -> Result<SimpleReduction> {
    if !classify(g).is_greibach {
        let p = g
            .productions()
            .iter()
            .find(|p| !(p.rhs[0].is_terminal() && p.rhs[1..].iter().all(|x| x.is_nonterminal())))
            .expect("some production is not Greibach");
        return Err(Error::NotGreibach(g.display_production(p)));
    }
    if s.is_empty() {
        return Err(Error::EmptyScope);
    }
    let letters = g
        .encode_word(s)
        .ok_or_else(|| Error::ForeignTerminal(s.iter().find(|a| g.terminal_id(a.as_ref()).is_none()).unwrap().as_ref().into()))?;

    let mut b = GrammarBuilder::new().weighted(g.is_weighted());
    for a in g.nonterminals() {
        b.nonterminal(a);
    }
    let mut pairs = Vec::with_capacity(g.productions().len());
    // leading[t] = paired terminals whose base is t
    let mut leading: Vec<Vec<usize>> = vec![Vec::new(); g.terminals().len()];
    for p in g.productions() {
        let Symbol::T(a) = p.rhs[0] else { unreachable!() };
        let pair = PairedTerminal { base: g.terminal_name(a).to_string(), production: p.index + 1 };
        let t = b.terminal(&pair.name());
        pairs.push(pair);
        leading[a].push(t);
        let mut rhs = p.rhs.clone();
        rhs[0] = Symbol::T(t);
        b.production(p.lhs, rhs, p.weight);
    }
    let grammar = b.build(g.start())?;
    let alphabet = Arc::new(Alphabet::new(grammar.terminals()));
    let values: Vec<Vec<&str>> =
        letters.iter().map(|&a| leading[a].iter().map(|&t| grammar.terminal_name(t)).collect()).collect();
    let domains = VarDomains::from_values(alphabet, &values)?;
    Ok(SimpleReduction { grammar, domains, pairs })
}

#[derive(Debug, Clone)]
pub struct BitmapReduction {
    pub grammar: Grammar,
    /// Concatenated per-position bitmaps, one `"0"`/`"1"` symbol each.
    pub word: Vec<String>,
}

impl BitmapReduction {
    pub fn bits(&self) -> String {
        self.word.concat()
    }
}

/// Builds `G'` over `{0, 1}` and the bitmap string `s`: terminal `j` (in
/// the grammar's terminal order, 1-based) is replaced by a block
/// `T_j -> B^{j-1} 1 B^{|T|-j}`, and position `i` of the domains becomes
/// the bitmap of `D(Xi)`. Then `s ∈ L(G')` iff some string of `L(g)` lies
/// in the Cartesian product of the domains.
///
/// Every terminal occurrence is replaced, not only the leading one, so that
/// right-hand sides with terminals after the head keep the equivalence.
pub fn bitmap_reduction(g: &Grammar, domains: &VarDomains) -> Result<BitmapReduction> {
    if let Some(p) = g.productions().iter().find(|p| !p.rhs[0].is_terminal()) {
        return Err(Error::NotLeadingTerminal(g.display_production(p)));
    }
    let width = g.terminals().len();
    let mut word = Vec::with_capacity(domains.len() * width);
    for i in 0..domains.len() {
        let mut bitmap = vec!["0".to_string(); width];
        for a in domains.symbols(i) {
            let t = g.terminal_id(a).ok_or_else(|| Error::ForeignTerminal(a.to_string()))?;
            bitmap[t] = "1".to_string();
        }
        word.extend(bitmap);
    }

    let mut b = GrammarBuilder::new().weighted(g.is_weighted());
    for a in g.nonterminals() {
        b.nonterminal(a);
    }
    let zero = Symbol::T(b.terminal("0"));
    let one = Symbol::T(b.terminal("1"));
    let bit = b.fresh_nonterminal("B");
    b.production(bit, vec![zero], 0);
    b.production(bit, vec![one], 0);
    let mut blocks = Vec::with_capacity(width);
    for j in 0..width {
        let tj = b.fresh_nonterminal(&format!("T_{}", j + 1));
        let rhs = (0..width).map(|k| if k == j { one } else { Symbol::N(bit) }).collect();
        b.production(tj, rhs, 0);
        blocks.push(tj);
    }
    for p in g.productions() {
        let rhs = p
            .rhs
            .iter()
            .map(|s| match *s {
                Symbol::T(t) => Symbol::N(blocks[t]),
                n => n,
            })
            .collect();
        b.production(p.lhs, rhs, p.weight);
    }
    Ok(BitmapReduction { grammar: b.build(g.start())?, word })
}
