//! Context-free grammars over interned symbols.
//!
//! Terminals and nonterminals are numbered densely from zero within their
//! kind. Productions keep the order in which they were added, and that
//! order is the one the reductions and the text format rely on.

mod classify;
mod language;
mod text;

pub use classify::{classify, GrammarClass};
pub use language::{enumerate_language, MAX_ENUMERATION_LENGTH};
pub use text::{parse_grammar, serialize_grammar};

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Largest accepted production weight. Sums are carried in `u64`, so even
/// long derivations of maximal weight cannot overflow.
pub const MAX_WEIGHT: u64 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(usize),
    N(usize),
}

impl Symbol {
    pub fn is_terminal(self) -> bool {
        matches!(self, Symbol::T(_))
    }

    pub fn is_nonterminal(self) -> bool {
        matches!(self, Symbol::N(_))
    }

    pub fn terminal(self) -> Option<usize> {
        match self {
            Symbol::T(t) => Some(t),
            Symbol::N(_) => None,
        }
    }

    pub fn nonterminal(self) -> Option<usize> {
        match self {
            Symbol::N(a) => Some(a),
            Symbol::T(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
    pub weight: u64,
    /// Position in the grammar's production list.
    pub index: usize,
}

impl Production {
    pub fn nonterminal_count(&self) -> usize {
        self.rhs.iter().filter(|s| s.is_nonterminal()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    productions: Vec<Production>,
    start: usize,
    weighted: bool,
}

pub(crate) fn valid_nonterminal_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
        && !name.chars().any(|c| c.is_whitespace() || c == '\'' || c == '[')
        && !name.contains("->")
}

fn valid_terminal_name(name: &str) -> bool {
    !name.is_empty() && !name.contains('\n') && !name.contains('\r')
}

impl Grammar {
    /// Builds a grammar from explicit symbol tables. Production indices are
    /// reassigned from list order.
    pub fn new(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        productions: Vec<(usize, Vec<Symbol>, u64)>,
        start: usize,
        weighted: bool,
    ) -> Result<Grammar> {
        check_names("terminal", &terminals, valid_terminal_name)?;
        check_names("nonterminal", &nonterminals, valid_nonterminal_name)?;
        if start >= nonterminals.len() {
            return Err(Error::SymbolOutOfRange { kind: "nonterminal", id: start });
        }
        let mut prods = Vec::with_capacity(productions.len());
        for (index, (lhs, rhs, weight)) in productions.into_iter().enumerate() {
            if lhs >= nonterminals.len() {
                return Err(Error::SymbolOutOfRange { kind: "nonterminal", id: lhs });
            }
            if rhs.is_empty() {
                return Err(Error::EmptyRhs { line: 0, lhs: nonterminals[lhs].clone() });
            }
            for s in &rhs {
                match *s {
                    Symbol::T(t) if t >= terminals.len() => {
                        return Err(Error::SymbolOutOfRange { kind: "terminal", id: t })
                    }
                    Symbol::N(a) if a >= nonterminals.len() => {
                        return Err(Error::SymbolOutOfRange { kind: "nonterminal", id: a })
                    }
                    _ => {}
                }
            }
            if weight > MAX_WEIGHT {
                return Err(Error::WeightOverflow(weight));
            }
            prods.push(Production { lhs, rhs, weight, index });
        }
        Ok(Grammar { terminals, nonterminals, productions: prods, start, weighted })
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn terminal_name(&self, t: usize) -> &str {
        &self.terminals[t]
    }

    pub fn nonterminal_name(&self, a: usize) -> &str {
        &self.nonterminals[a]
    }

    pub fn terminal_id(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    pub fn nonterminal_id(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|t| t == name)
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::T(t) => &self.terminals[t],
            Symbol::N(a) => &self.nonterminals[a],
        }
    }

    /// `|G|`: the sum over productions of `1 + |rhs|`.
    pub fn size(&self) -> usize {
        self.productions.iter().map(|p| 1 + p.rhs.len()).sum()
    }

    pub fn productions_of(&self, a: usize) -> impl Iterator<Item = &Production> {
        self.productions.iter().filter(move |p| p.lhs == a)
    }

    /// Productions grouped by left-hand side.
    pub fn by_lhs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nonterminals.len()];
        for p in &self.productions {
            out[p.lhs].push(p.index);
        }
        out
    }

    pub fn is_cnf(&self) -> bool {
        self.productions
            .iter()
            .all(|p| matches!(p.rhs.as_slice(), [Symbol::T(_)] | [Symbol::N(_), Symbol::N(_)]))
    }

    pub fn require_cnf(&self) -> Result<()> {
        match self.productions.iter().find(|p| {
            !matches!(p.rhs.as_slice(), [Symbol::T(_)] | [Symbol::N(_), Symbol::N(_)])
        }) {
            Some(p) => Err(Error::NotCnf(self.display_production(p))),
            None => Ok(()),
        }
    }

    pub fn display_production(&self, p: &Production) -> String {
        let mut s = format!("{} ->", self.nonterminals[p.lhs]);
        for sym in &p.rhs {
            s.push(' ');
            s.push_str(self.symbol_name(*sym));
        }
        if self.weighted {
            s.push_str(&format!(" [{}]", p.weight));
        }
        s
    }

    /// Maps a word of terminal names to terminal ids; `None` if some name is
    /// not a terminal of this grammar.
    pub fn encode_word<S: AsRef<str>>(&self, word: &[S]) -> Option<Vec<usize>> {
        let index: HashMap<&str, usize> =
            self.terminals.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
        word.iter().map(|w| index.get(w.as_ref()).copied()).collect()
    }

    /// Keeps the marked nonterminals (the start symbol always survives) and
    /// the productions whose symbols all survive. Relative order is kept.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Grammar {
        let mut remap = vec![usize::MAX; self.nonterminals.len()];
        let mut names = Vec::new();
        for (a, name) in self.nonterminals.iter().enumerate() {
            if keep[a] || a == self.start {
                remap[a] = names.len();
                names.push(name.clone());
            }
        }
        let mut productions = Vec::new();
        for p in &self.productions {
            if !keep[p.lhs] {
                continue;
            }
            if p.rhs.iter().any(|s| matches!(s, Symbol::N(b) if !keep[*b])) {
                continue;
            }
            let rhs = p
                .rhs
                .iter()
                .map(|s| match *s {
                    Symbol::N(b) => Symbol::N(remap[b]),
                    t => t,
                })
                .collect();
            productions.push(Production { lhs: remap[p.lhs], rhs, weight: p.weight, index: productions.len() });
        }
        Grammar {
            terminals: self.terminals.clone(),
            nonterminals: names,
            productions,
            start: remap[self.start],
            weighted: self.weighted,
        }
    }
}

fn check_names(kind: &'static str, names: &[String], valid: fn(&str) -> bool) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !valid(name) {
            return Err(Error::InvalidName { kind, name: name.clone() });
        }
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateName { kind, name: name.clone() });
        }
    }
    Ok(())
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_grammar(self))
    }
}

/// Incremental construction with name interning. Used by the parser and by
/// every transformation that emits a new grammar.
#[derive(Debug, Default, Clone)]
pub struct GrammarBuilder {
    terminals: Vec<String>,
    terminal_ids: HashMap<String, usize>,
    nonterminals: Vec<String>,
    nonterminal_ids: HashMap<String, usize>,
    productions: Vec<(usize, Vec<Symbol>, u64)>,
    weighted: bool,
}

impl GrammarBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn weighted(mut self, weighted: bool) -> Self {
        self.weighted = weighted;
        self
    }

    pub fn set_weighted(&mut self, weighted: bool) {
        self.weighted = weighted;
    }

    pub fn terminal(&mut self, name: &str) -> usize {
        if let Some(&t) = self.terminal_ids.get(name) {
            return t;
        }
        let t = self.terminals.len();
        self.terminals.push(name.to_string());
        self.terminal_ids.insert(name.to_string(), t);
        t
    }

    pub fn nonterminal(&mut self, name: &str) -> usize {
        if let Some(&a) = self.nonterminal_ids.get(name) {
            return a;
        }
        let a = self.nonterminals.len();
        self.nonterminals.push(name.to_string());
        self.nonterminal_ids.insert(name.to_string(), a);
        a
    }

    pub fn has_nonterminal(&self, name: &str) -> bool {
        self.nonterminal_ids.contains_key(name)
    }

    /// A new nonterminal whose name starts with `base` and is not yet taken.
    pub fn fresh_nonterminal(&mut self, base: &str) -> usize {
        if !self.has_nonterminal(base) {
            return self.nonterminal(base);
        }
        let mut k = 2;
        loop {
            let name = format!("{base}_{k}");
            if !self.has_nonterminal(&name) {
                return self.nonterminal(&name);
            }
            k += 1;
        }
    }

    pub fn production(&mut self, lhs: usize, rhs: Vec<Symbol>, weight: u64) {
        self.productions.push((lhs, rhs, weight));
    }

    pub fn production_count(&self) -> usize {
        self.productions.len()
    }

    /// Copies the symbol tables of `g` so that ids coincide.
    pub fn with_symbols_of(g: &Grammar) -> Self {
        let mut b = GrammarBuilder::new().weighted(g.weighted);
        for t in &g.terminals {
            b.terminal(t);
        }
        for a in &g.nonterminals {
            b.nonterminal(a);
        }
        b
    }

    pub fn build(self, start: usize) -> Result<Grammar> {
        Grammar::new(self.terminals, self.nonterminals, self.productions, start, self.weighted)
    }
}

/// Turns an arbitrary terminal name into something usable inside a
/// nonterminal name.
pub(crate) fn name_fragment(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            out.push(c);
        } else {
            out.push_str(&format!("x{:x}", c as u32));
        }
    }
    out
}
