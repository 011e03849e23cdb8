use std::collections::HashSet;

use super::{Grammar, Symbol};

/// Syntactic grammar classes, each checked production by production.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GrammarClass {
    /// Every production is `A -> w` or `A -> w B` with `w` a nonempty
    /// terminal string.
    pub is_regular: bool,
    /// At most one nonterminal per right-hand side.
    pub is_linear: bool,
    /// Every production is `A -> a B1 .. Bk`.
    pub is_greibach: bool,
    /// Greibach, and at most one production per (nonterminal, leading terminal).
    pub is_simple: bool,
    pub is_cnf: bool,
    /// `(l, r)` such that every production with a nonterminal is `A -> u B w`
    /// with `|u| = l`, `|w| = r`, when such a pair is unique and `l + r >= 1`.
    pub fixed_growth: Option<(usize, usize)>,
}

pub fn classify(g: &Grammar) -> GrammarClass {
    let prods = g.productions();

    let is_linear = prods.iter().all(|p| p.nonterminal_count() <= 1);

    let is_regular = prods.iter().all(|p| {
        let (last, init) = p.rhs.split_last().expect("nonempty rhs");
        init.iter().all(|s| s.is_terminal()) && (last.is_terminal() || !init.is_empty())
    });

    let is_greibach = prods
        .iter()
        .all(|p| p.rhs[0].is_terminal() && p.rhs[1..].iter().all(|s| s.is_nonterminal()));

    let is_simple = is_greibach && {
        let mut seen = HashSet::new();
        prods.iter().all(|p| seen.insert((p.lhs, p.rhs[0])))
    };

    let is_cnf = g.is_cnf();

    let fixed_growth = if is_linear {
        let mut shapes = prods.iter().filter_map(|p| {
            let pos = p.rhs.iter().position(|s| matches!(s, Symbol::N(_)))?;
            Some((pos, p.rhs.len() - pos - 1))
        });
        match shapes.next() {
            Some(first) if first.0 + first.1 >= 1 && shapes.all(|s| s == first) => Some(first),
            _ => None,
        }
    } else {
        None
    };

    GrammarClass { is_regular, is_linear, is_greibach, is_simple, is_cnf, fixed_growth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    #[test]
    fn right_recursive_grammar_is_everything_linear() {
        let c = classify(&parse_grammar("S -> a S\nS -> b").unwrap());
        assert!(c.is_regular && c.is_linear && c.is_greibach && c.is_simple);
        assert!(!c.is_cnf);
        assert_eq!(c.fixed_growth, Some((1, 0)));
    }

    #[test]
    fn two_nonterminals_break_linearity() {
        let c = classify(&parse_grammar("S -> S S\nS -> a").unwrap());
        assert!(!c.is_regular && !c.is_linear && c.fixed_growth.is_none());
        assert!(c.is_cnf);
        assert!(!c.is_greibach);
    }

    #[test]
    fn even_linear_growth() {
        let c = classify(&parse_grammar("S -> a S b\nS -> c").unwrap());
        assert!(c.is_linear && !c.is_regular);
        assert_eq!(c.fixed_growth, Some((1, 1)));
        let c = classify(&parse_grammar("S -> a S b\nS -> a S\nS -> c").unwrap());
        assert_eq!(c.fixed_growth, None);
    }

    #[test]
    fn chain_and_finite_grammars_have_no_growth() {
        assert_eq!(classify(&parse_grammar("S -> A\nA -> a").unwrap()).fixed_growth, None);
        assert_eq!(classify(&parse_grammar("S -> a b").unwrap()).fixed_growth, None);
    }

    #[test]
    fn simple_needs_unique_leading_terminal() {
        let c = classify(&parse_grammar("S -> a S\nS -> a").unwrap());
        assert!(c.is_greibach && !c.is_simple);
    }

    #[test]
    fn regular_allows_terminal_strings() {
        let c = classify(&parse_grammar("S -> a b S\nS -> a b").unwrap());
        assert!(c.is_regular && !c.is_greibach);
        let c = classify(&parse_grammar("S -> S a\nS -> a").unwrap());
        assert!(!c.is_regular && c.is_linear);
        assert_eq!(c.fixed_growth, Some((0, 1)));
    }
}
