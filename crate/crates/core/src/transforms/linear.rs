use super::cnf::{eliminate_units, lift_terminals, to_cnf};
use super::trim::trim;
use crate::error::{Error, Result};
use crate::grammar::{classify, Grammar, GrammarBuilder, Symbol};

/// True when every production is `A -> aB`, `A -> Ba` or `A -> a`.
pub fn is_linear_normal_form(g: &Grammar) -> bool {
    g.productions().iter().all(|p| {
        matches!(
            p.rhs.as_slice(),
            [Symbol::T(_)] | [Symbol::T(_), Symbol::N(_)] | [Symbol::N(_), Symbol::T(_)]
        )
    })
}

/// Rewrites a linear grammar so that every production is `A -> aB`,
/// `A -> Ba` or `A -> a`.
///
/// `A -> a1..al B bk..b1` peels one terminal per production, left side
/// first: `A -> a1 A2, .., Al -> al B1, B1 -> B2 b1, .., Bk -> B bk`.
/// Chain productions are removed first. The head keeps the weight.
pub fn to_linear_normal_form(g: &Grammar) -> Result<Grammar> {
    if let Some(p) = g.productions().iter().find(|p| p.nonterminal_count() > 1) {
        return Err(Error::NotLinear(g.display_production(p)));
    }
    let g = trim(&eliminate_units(g));
    let mut b = GrammarBuilder::with_symbols_of(&g);
    for p in g.productions() {
        let lhs_name = g.nonterminal_name(p.lhs).to_string();
        let rhs = &p.rhs;
        match rhs.iter().position(|s| s.is_nonterminal()) {
            Some(pos) => {
                let middle = rhs[pos];
                // (peel-from-left?, terminal) in peeling order
                let mut steps: Vec<(bool, Symbol)> = rhs[..pos].iter().map(|&t| (true, t)).collect();
                steps.extend(rhs[pos + 1..].iter().rev().map(|&t| (false, t)));
                if steps.len() <= 1 {
                    b.production(p.lhs, rhs.clone(), p.weight);
                    continue;
                }
                let mut cur = p.lhs;
                let mut weight = p.weight;
                let last = steps.len() - 1;
                for (k, (left, t)) in steps.into_iter().enumerate() {
                    let target = if k == last { middle } else { Symbol::N(b.fresh_nonterminal(&format!("{lhs_name}_l"))) };
                    let body = if left { vec![t, target] } else { vec![target, t] };
                    b.production(cur, body, weight);
                    weight = 0;
                    if let Symbol::N(next) = target {
                        cur = next;
                    }
                }
            }
            None => {
                if rhs.len() == 1 {
                    b.production(p.lhs, rhs.clone(), p.weight);
                    continue;
                }
                let mut cur = p.lhs;
                let mut weight = p.weight;
                for t in &rhs[..rhs.len() - 1] {
                    let next = b.fresh_nonterminal(&format!("{lhs_name}_l"));
                    b.production(cur, vec![*t, Symbol::N(next)], weight);
                    weight = 0;
                    cur = next;
                }
                b.production(cur, vec![rhs[rhs.len() - 1]], weight);
            }
        }
    }
    b.build(g.start())
}

/// Second pass: `A -> aB` becomes `A -> Y_a B`, `A -> Ba` becomes
/// `A -> B Y_a`, with `Y_a -> a`. The result is in Chomsky form and every
/// binary production has a child that only spans one position.
pub fn linear_to_cnf(g: &Grammar) -> Result<Grammar> {
    if !is_linear_normal_form(g) {
        let p = g
            .productions()
            .iter()
            .find(|p| !matches!(p.rhs.as_slice(), [Symbol::T(_)] | [Symbol::T(_), Symbol::N(_)] | [Symbol::N(_), Symbol::T(_)]))
            .expect("some production is off-form");
        return Err(Error::NotLinear(g.display_production(p)));
    }
    Ok(lift_terminals(g, |p| p.rhs.len() == 2))
}

/// The Chomsky-form grammar a CYK propagator should run on: the linear
/// normal form route for linear grammars, plain CNF otherwise.
pub fn propagator_cnf(g: &Grammar) -> Grammar {
    if g.is_cnf() {
        return g.clone();
    }
    if classify(g).is_linear {
        let lnf = to_linear_normal_form(g).expect("linear grammar");
        linear_to_cnf(&lnf).expect("normal form")
    } else {
        to_cnf(g)
    }
}
