//! Nondeterministic finite automata over named terminals.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::domains::VarDomains;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    states: usize,
    initial: usize,
    accepting: BTreeSet<usize>,
    /// Sorted, without duplicates.
    transitions: Vec<(usize, String, usize)>,
}

impl Nfa {
    pub fn new(
        states: usize,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: impl IntoIterator<Item = (usize, String, usize)>,
    ) -> Result<Nfa> {
        if initial >= states {
            return Err(Error::Automaton(format!("initial state {initial} out of range")));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&q) = accepting.iter().find(|&&q| q >= states) {
            return Err(Error::Automaton(format!("accepting state {q} out of range")));
        }
        let mut transitions: Vec<_> = transitions.into_iter().collect();
        for (q, _, r) in &transitions {
            if *q >= states || *r >= states {
                return Err(Error::Automaton(format!("transition {q} -> {r} leaves the state set")));
            }
        }
        transitions.sort();
        transitions.dedup();
        Ok(Nfa { states, initial, accepting, transitions })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &[(usize, String, usize)] {
        &self.transitions
    }

    pub fn alphabet(&self) -> BTreeSet<&str> {
        self.transitions.iter().map(|(_, a, _)| a.as_str()).collect()
    }

    /// Direct subset simulation.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current = vec![false; self.states];
        current[self.initial] = true;
        for a in word {
            let mut next = vec![false; self.states];
            for (q, b, r) in &self.transitions {
                if current[*q] && b == a.as_ref() {
                    next[*r] = true;
                }
            }
            current = next;
        }
        self.accepting.iter().any(|&q| current[q])
    }

    /// Layered automaton for the Cartesian product of the domains: states
    /// `0..=n`, `(i, a, i+1)` for each `a ∈ D(X_{i+1})`, accepting `{n}`.
    pub fn cartesian(domains: &VarDomains) -> Nfa {
        let n = domains.len();
        let mut transitions = Vec::new();
        for i in 0..n {
            for a in domains.symbols(i) {
                transitions.push((i, a.to_string(), i + 1));
            }
        }
        Nfa::new(n + 1, 0, [n], transitions).expect("layered automaton is well formed")
    }

    /// Chain automaton accepting exactly `word`.
    pub fn exact<S: AsRef<str>>(word: &[S]) -> Nfa {
        let transitions = word.iter().enumerate().map(|(i, a)| (i, a.as_ref().to_string(), i + 1));
        Nfa::new(word.len() + 1, 0, [word.len()], transitions).expect("chain automaton is well formed")
    }

    /// One state accepting every string over `alphabet`, including ε.
    pub fn universal<S: AsRef<str>>(alphabet: &[S]) -> Nfa {
        Nfa::new(1, 0, [0], alphabet.iter().map(|a| (0, a.as_ref().to_string(), 0))).expect("well formed")
    }

    /// An automaton for the reversed language. A fresh initial state copies
    /// the outgoing (reversed) transitions of every old accepting state, so
    /// the result keeps a single initial state without ε moves.
    pub fn reverse(&self) -> Nfa {
        let fresh = self.states;
        let mut transitions: Vec<(usize, String, usize)> =
            self.transitions.iter().map(|(q, a, r)| (*r, a.clone(), *q)).collect();
        let from_accepting: Vec<_> = transitions
            .iter()
            .filter(|(q, _, _)| self.accepting.contains(q))
            .map(|(_, a, r)| (fresh, a.clone(), *r))
            .collect();
        transitions.extend(from_accepting);
        let mut accepting = vec![self.initial];
        if self.accepting.contains(&self.initial) {
            accepting.push(fresh);
        }
        Nfa::new(self.states + 1, fresh, accepting, transitions).expect("reversal is well formed")
    }

    /// Automaton for `L(self) · sep · L(other)`: every accepting state of
    /// `self` moves on `sep` to the initial state of `other`.
    pub fn concat_with_separator(&self, sep: &str, other: &Nfa) -> Nfa {
        let offset = self.states;
        let mut transitions = self.transitions.clone();
        transitions.extend(other.transitions.iter().map(|(q, a, r)| (q + offset, a.clone(), r + offset)));
        for &f in &self.accepting {
            transitions.push((f, sep.to_string(), other.initial + offset));
        }
        let accepting = other.accepting.iter().map(|q| q + offset);
        Nfa::new(self.states + other.states, self.initial, accepting, transitions)
            .expect("concatenation is well formed")
    }

    /// Product automaton for `L(self) ∩ L(other)`, restricted to pairs
    /// reachable from the initial pair.
    pub fn intersect(&self, other: &Nfa) -> Nfa {
        let mut out_b: HashMap<(usize, &str), Vec<usize>> = HashMap::new();
        for (q, a, r) in &other.transitions {
            out_b.entry((*q, a.as_str())).or_default().push(*r);
        }
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut stack = vec![(self.initial, other.initial)];
        ids.insert((self.initial, other.initial), 0);
        let mut transitions = Vec::new();
        while let Some((p, q)) = stack.pop() {
            let from = ids[&(p, q)];
            for (_, a, p2) in self.transitions.iter().filter(|(s, _, _)| *s == p) {
                for &q2 in out_b.get(&(q, a.as_str())).into_iter().flatten() {
                    let next = ids.len();
                    let to = *ids.entry((*p2, q2)).or_insert_with(|| {
                        stack.push((*p2, q2));
                        next
                    });
                    transitions.push((from, a.clone(), to));
                }
            }
        }
        let accepting: Vec<usize> = ids
            .iter()
            .filter(|((p, q), _)| self.accepting.contains(p) && other.accepting.contains(q))
            .map(|(_, &id)| id)
            .collect();
        Nfa::new(ids.len(), 0, accepting, transitions).expect("product is well formed")
    }

    pub fn from_json(text: &str) -> Result<Nfa> {
        let file: AutomatonFile = serde_json::from_str(text).map_err(|e| Error::Automaton(e.to_string()))?;
        Nfa::new(file.states, file.initial, file.accepting, file.transitions)
    }

    pub fn to_json(&self) -> String {
        let file = AutomatonFile {
            states: self.states,
            initial: self.initial,
            accepting: self.accepting.iter().copied().collect(),
            transitions: self.transitions.clone(),
        };
        serde_json::to_string(&file).expect("serializable")
    }
}

/// `{"states": k, "initial": 0, "accepting": [..], "transitions": [[q, "a", q2], ..]}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<usize>,
    pub transitions: Vec<(usize, String, usize)>,
}
