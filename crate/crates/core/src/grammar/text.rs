//! Line-oriented grammar files.
//!
//! ```text
//! # comment
//! start: S
//! S -> a S 'b' [1]
//! S -> '#'
//! ```
//!
//! Bare tokens starting with an uppercase ASCII letter are nonterminals,
//! every other bare token and every single-quoted token is a terminal. A
//! trailing `[w]` sets the production weight; any weight makes the grammar
//! weighted. Besides `start:`, the optional headers `terminals:` and
//! `nonterminals:` declare symbols ahead of use, which fixes their ids and
//! lets unused symbols survive a round trip.

use super::{valid_nonterminal_name, Grammar, GrammarBuilder, Symbol};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Bare(String),
    Quoted(String),
    Weight(u64),
}

fn tokenize(text: &str, line: usize) -> Result<Vec<Token>> {
    let syntax = |message: String| Error::Syntax { line, message };
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '\'' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(syntax("unterminated quoted terminal".into())),
                    Some('\\') => {
                        let next = chars.get(i + 1).ok_or_else(|| syntax("dangling escape".into()))?;
                        s.push(*next);
                        i += 2;
                    }
                    Some('\'') => {
                        i += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            if s.is_empty() {
                return Err(syntax("empty quoted terminal".into()));
            }
            tokens.push(Token::Quoted(s));
        } else if c == '[' {
            let close = chars[i..]
                .iter()
                .position(|&ch| ch == ']')
                .ok_or_else(|| syntax("unterminated weight".into()))?;
            let body: String = chars[i + 1..i + close].iter().collect();
            let w = body
                .trim()
                .parse::<u64>()
                .map_err(|_| syntax(format!("bad weight `[{body}]`")))?;
            tokens.push(Token::Weight(w));
            i += close + 1;
        } else {
            let begin = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            match split_weight_suffix(&word) {
                Some((head, w)) => {
                    tokens.push(Token::Bare(head.to_string()));
                    tokens.push(Token::Weight(w));
                }
                None => tokens.push(Token::Bare(word)),
            }
        }
    }
    Ok(tokens)
}

/// `a[3]` -> (`a`, 3).
fn split_weight_suffix(word: &str) -> Option<(&str, u64)> {
    let body = word.strip_suffix(']')?;
    let open = body.rfind('[')?;
    if open == 0 {
        return None;
    }
    let w = body[open + 1..].parse().ok()?;
    Some((&word[..open], w))
}

fn is_nonterminal_token(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

enum Header {
    Start,
    Terminals,
    Nonterminals,
}

fn header(line: &str) -> Option<(Header, &str)> {
    for (key, h) in [
        ("start:", Header::Start),
        ("terminals:", Header::Terminals),
        ("nonterminals:", Header::Nonterminals),
    ] {
        if let Some(rest) = line.strip_prefix(key) {
            return Some((h, rest));
        }
    }
    None
}

/// Parses the grammar file format. Production order is textual order.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut b = GrammarBuilder::new();
    let mut start: Option<String> = None;
    let mut first_lhs: Option<usize> = None;
    let mut weighted = false;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |message: String| Error::Syntax { line: line_no, message };

        if let Some((h, rest)) = header(line) {
            let tokens = tokenize(rest, line_no)?;
            match h {
                Header::Start => match tokens.as_slice() {
                    [Token::Bare(name)] if valid_nonterminal_name(name) => start = Some(name.clone()),
                    _ => return Err(syntax("`start:` expects one nonterminal".into())),
                },
                Header::Terminals => {
                    for t in tokens {
                        match t {
                            Token::Bare(s) | Token::Quoted(s) => {
                                b.terminal(&s);
                            }
                            Token::Weight(_) => return Err(syntax("weight in terminal list".into())),
                        }
                    }
                }
                Header::Nonterminals => {
                    for t in tokens {
                        match t {
                            Token::Bare(s) if valid_nonterminal_name(&s) => {
                                b.nonterminal(&s);
                            }
                            _ => return Err(syntax("bad entry in nonterminal list".into())),
                        }
                    }
                }
            }
            continue;
        }

        let arrow = line.find("->").ok_or_else(|| syntax("expected `->`".into()))?;
        let lhs_text = line[..arrow].trim();
        if !valid_nonterminal_name(lhs_text) {
            return Err(syntax(format!("left-hand side `{lhs_text}` is not a nonterminal")));
        }
        let mut tokens = tokenize(&line[arrow + 2..], line_no)?;
        let mut weight = 0;
        if let Some(Token::Weight(w)) = tokens.last() {
            weight = *w;
            weighted = true;
            tokens.pop();
        }
        if tokens.is_empty() {
            return Err(Error::EmptyRhs { line: line_no, lhs: lhs_text.to_string() });
        }
        let lhs = b.nonterminal(lhs_text);
        first_lhs.get_or_insert(lhs);
        let mut rhs = Vec::with_capacity(tokens.len());
        for t in tokens {
            match t {
                Token::Quoted(s) => rhs.push(Symbol::T(b.terminal(&s))),
                Token::Bare(s) if is_nonterminal_token(&s) => {
                    if !valid_nonterminal_name(&s) {
                        return Err(syntax(format!("invalid nonterminal `{s}`")));
                    }
                    rhs.push(Symbol::N(b.nonterminal(&s)));
                }
                Token::Bare(s) => rhs.push(Symbol::T(b.terminal(&s))),
                Token::Weight(_) => return Err(syntax("weight must be the last token".into())),
            }
        }
        b.production(lhs, rhs, weight);
    }

    let start = match (start, first_lhs) {
        (Some(name), _) => b.nonterminal(&name),
        (None, Some(a)) => a,
        (None, None) => return Err(Error::NoStartSymbol),
    };
    b.set_weighted(weighted);
    b.build(start)
}

fn needs_quotes(t: &str) -> bool {
    let first = t.chars().next().unwrap_or(' ');
    first.is_ascii_uppercase()
        || first == '#'
        || first == '\''
        || first == '['
        || t.contains("->")
        || t.chars().any(|c| c.is_whitespace() || c == '\'' || c == '\\' || c == '[' || c == ']')
}

fn write_terminal(out: &mut String, t: &str) {
    if needs_quotes(t) {
        out.push('\'');
        for c in t.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    } else {
        out.push_str(t);
    }
}

/// Writes `g` in the grammar file format, with symbol declaration headers
/// so that parsing the output reproduces `g` exactly.
pub fn serialize_grammar(g: &Grammar) -> String {
    let mut out = String::new();
    out.push_str("start: ");
    out.push_str(g.nonterminal_name(g.start()));
    out.push('\n');
    out.push_str("nonterminals:");
    for a in g.nonterminals() {
        out.push(' ');
        out.push_str(a);
    }
    out.push('\n');
    out.push_str("terminals:");
    for t in g.terminals() {
        out.push(' ');
        write_terminal(&mut out, t);
    }
    out.push('\n');
    for p in g.productions() {
        out.push_str(g.nonterminal_name(p.lhs));
        out.push_str(" ->");
        for s in &p.rhs {
            out.push(' ');
            match *s {
                Symbol::T(t) => write_terminal(&mut out, g.terminal_name(t)),
                Symbol::N(a) => out.push_str(g.nonterminal_name(a)),
            }
        }
        if g.is_weighted() {
            out.push_str(&format!(" [{}]", p.weight));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_production() {
        let g = parse_grammar("S -> a").unwrap();
        assert_eq!(g.productions().len(), 1);
        assert_eq!(g.terminals(), ["a"]);
        assert_eq!(g.nonterminal_name(g.start()), "S");
        assert!(!g.is_weighted());
    }

    #[test]
    fn empty_rhs_is_rejected() {
        assert_eq!(parse_grammar("S -> "), Err(Error::EmptyRhs { line: 1, lhs: "S".into() }));
        assert!(matches!(parse_grammar("S -> a\nA -> [2]"), Err(Error::EmptyRhs { line: 2, .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_grammar("# c\n\nS -> a\nS a b").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, .. }), "{err:?}");
        let err = parse_grammar("s -> a").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_grammar("S -> 'a").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_grammar("S -> a [x]").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        assert_eq!(parse_grammar("# only a comment"), Err(Error::NoStartSymbol));
    }

    #[test]
    fn lexical_kinds_and_quotes() {
        let g = parse_grammar("S -> '(' S ')' \nS -> 'B' x").unwrap();
        assert_eq!(g.terminals(), ["(", ")", "B", "x"]);
        assert_eq!(g.nonterminals(), ["S"]);
    }

    #[test]
    fn weights_and_start_header() {
        let g = parse_grammar("start: T\nS -> a [3]\nT -> S S\nS -> '#'[0]").unwrap();
        assert!(g.is_weighted());
        assert_eq!(g.nonterminal_name(g.start()), "T");
        assert_eq!(g.productions()[0].weight, 3);
        assert_eq!(g.productions()[2].rhs, vec![Symbol::T(1)]);
        assert_eq!(g.terminal_name(1), "#");
        let g = parse_grammar("S -> a[2]").unwrap();
        assert_eq!(g.productions()[0].weight, 2);
        assert_eq!(g.terminals(), ["a"]);
    }

    #[test]
    fn arrow_without_spaces() {
        let g = parse_grammar("S->a S").unwrap();
        assert_eq!(g.productions()[0].rhs, vec![Symbol::T(0), Symbol::N(0)]);
    }

    #[test]
    fn round_trip_single() {
        let g = parse_grammar("S -> a").unwrap();
        assert_eq!(parse_grammar(&serialize_grammar(&g)).unwrap(), g);
    }

    #[test]
    fn round_trip_keeps_weights_and_awkward_terminals() {
        let g = parse_grammar("S -> 'it\\'s' S [0]\nS -> 'a b' [1]\nS -> '\\\\' '[x]' Q [0]\nQ -> '->' [1]")
            .unwrap_or_else(|e| panic!("{e}"));
        let text = serialize_grammar(&g);
        assert_eq!(parse_grammar(&text).unwrap(), g, "{text}");
        assert_eq!(g.productions()[1].weight, 1);
    }
}
