//! A small depth-first solver for sequence models over grammar and regular
//! constraints.
//!
//! Every node propagates all constraints to a fixpoint, then branches on a
//! random unassigned variable `X` and a random value `v` from its domain:
//! first `X = v`, then `X != v`. Each such decision counts as one choice
//! point.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::Nfa;
use crate::domains::{Filtered, VarDomains, ZBound};
use crate::error::{Error, Result};
use crate::grammar::Grammar;
use crate::propagators::{regular_propagate, CykPropagator, FastPath};
use crate::transforms::propagator_cnf;

#[derive(Debug, Clone)]
pub enum ConstraintKind {
    Grammar(Arc<CykPropagator>),
    /// The bound is the initial domain of the cost variable.
    Weighted(Arc<CykPropagator>, ZBound),
    Regular(Arc<Nfa>),
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub scope: Vec<usize>,
    pub kind: ConstraintKind,
}

/// Variables with their initial domains plus constraints over them.
#[derive(Debug, Clone)]
pub struct Model {
    domains: VarDomains,
    constraints: Vec<Constraint>,
    /// Constraints mentioning each variable.
    watchers: Vec<Vec<usize>>,
}

/// Current domains during search, plus one cost bound per weighted
/// constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub domains: VarDomains,
    pub bounds: Vec<Option<ZBound>>,
}

impl Model {
    pub fn new(domains: VarDomains) -> Self {
        let watchers = vec![Vec::new(); domains.len()];
        Model { domains, constraints: Vec::new(), watchers }
    }

    pub fn domains(&self) -> &VarDomains {
        &self.domains
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    fn push(&mut self, scope: Vec<usize>, kind: ConstraintKind) -> Result<()> {
        if scope.is_empty() {
            return Err(Error::EmptyScope);
        }
        if let Some(&v) = scope.iter().find(|&&v| v >= self.domains.len()) {
            return Err(Error::SymbolOutOfRange { kind: "variable", id: v });
        }
        let c = self.constraints.len();
        for &v in &scope {
            if self.watchers[v].last() != Some(&c) {
                self.watchers[v].push(c);
            }
        }
        self.constraints.push(Constraint { scope, kind });
        Ok(())
    }

    /// `Grammar(scope, g)`. Non-CNF grammars are compiled first.
    pub fn add_grammar(&mut self, scope: Vec<usize>, g: &Grammar) -> Result<()> {
        let p = CykPropagator::new(&propagator_cnf(g), FastPath::Auto)?;
        self.push(scope, ConstraintKind::Grammar(Arc::new(p)))
    }

    /// `WeightedCFG(scope, Z, g)` with `Z` initially in `z`.
    pub fn add_weighted(&mut self, scope: Vec<usize>, g: &Grammar, z: ZBound) -> Result<()> {
        let p = CykPropagator::new(&propagator_cnf(g), FastPath::Auto)?;
        self.add_compiled_weighted(scope, Arc::new(p), z)
    }

    /// Shares one compiled grammar between several constraints.
    pub fn add_compiled_weighted(&mut self, scope: Vec<usize>, p: Arc<CykPropagator>, z: ZBound) -> Result<()> {
        self.push(scope, ConstraintKind::Weighted(p, z))
    }

    pub fn add_regular(&mut self, scope: Vec<usize>, r: &Nfa) -> Result<()> {
        self.push(scope, ConstraintKind::Regular(Arc::new(r.clone())))
    }

    pub fn initial_state(&self) -> State {
        let bounds = self
            .constraints
            .iter()
            .map(|c| match c.kind {
                ConstraintKind::Weighted(_, z) => Some(z),
                _ => None,
            })
            .collect();
        State { domains: self.domains.clone(), bounds }
    }

    /// Runs constraint `c` once. Returns the variables it changed, or
    /// `None` on failure.
    fn run(&self, c: usize, state: &mut State) -> Result<Option<Vec<usize>>> {
        let con = &self.constraints[c];
        let local = state.domains.project(&con.scope);
        let filtered = match &con.kind {
            ConstraintKind::Grammar(p) => p.propagate(&local)?,
            ConstraintKind::Weighted(p, _) => {
                let z = state.bounds[c].expect("weighted constraint has a bound");
                match p.propagate_weighted(&local, z)? {
                    Filtered::Consistent((d, z)) => {
                        state.bounds[c] = Some(z);
                        Filtered::Consistent(d)
                    }
                    Filtered::Disentailed => Filtered::Disentailed,
                }
            }
            ConstraintKind::Regular(r) => regular_propagate(r, &local),
        };
        let Filtered::Consistent(d) = filtered else { return Ok(None) };
        let mut changed = Vec::new();
        for (k, &v) in con.scope.iter().enumerate() {
            if state.domains.restrict(v, d.set(k)) {
                changed.push(v);
                if state.domains.set(v).is_clear() {
                    return Ok(None);
                }
            }
        }
        Ok(Some(changed))
    }

    /// Propagates every constraint, round robin in declaration order, until
    /// nothing changes. Returns `false` on failure.
    pub fn propagate_fixpoint(&self, state: &mut State) -> Result<bool> {
        let m = self.constraints.len();
        let mut dirty = vec![true; m];
        let mut pending = m;
        while pending > 0 {
            for c in 0..m {
                if !dirty[c] {
                    continue;
                }
                dirty[c] = false;
                pending -= 1;
                let Some(changed) = self.run(c, state)? else { return Ok(false) };
                for v in changed {
                    for &w in &self.watchers[v] {
                        // the propagators are idempotent on their own output
                        if w != c && !dirty[w] {
                            dirty[w] = true;
                            pending += 1;
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    /// The search finished before the timeout.
    pub solved: bool,
    /// `None` when the search timed out.
    pub satisfiable: Option<bool>,
    pub choice_points: u64,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub solution: Option<Vec<String>>,
}

enum Outcome {
    Found(VarDomains),
    Exhausted,
    TimedOut,
}

struct Search<'a> {
    model: &'a Model,
    rng: ChaCha8Rng,
    deadline: Option<Instant>,
    choice_points: u64,
}

impl Search<'_> {
    fn node(&mut self, mut state: State) -> Result<Outcome> {
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Ok(Outcome::TimedOut);
        }
        if !self.model.propagate_fixpoint(&mut state)? {
            return Ok(Outcome::Exhausted);
        }
        let d = &state.domains;
        let Some(var) = (0..d.len()).filter(|&i| !d.is_assigned(i)).choose(&mut self.rng) else {
            return Ok(Outcome::Found(state.domains));
        };
        let value = d.values(var).choose(&mut self.rng).expect("unassigned domain is non-empty");
        self.choice_points += 1;

        let mut left = state.clone();
        left.domains.assign(var, value);
        match self.node(left)? {
            Outcome::Exhausted => {}
            done => return Ok(done),
        }
        state.domains.remove(var, value);
        self.node(state)
    }
}

/// Searches for one solution. Timing covers the search only; the model is
/// already compiled.
pub fn solve(model: &Model, seed: u64, timeout: Option<Duration>) -> Result<SolveResult> {
    let start = Instant::now();
    let mut search = Search {
        model,
        rng: ChaCha8Rng::seed_from_u64(seed),
        deadline: timeout.map(|t| start + t),
        choice_points: 0,
    };
    let outcome = search.node(model.initial_state())?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
    let (solved, satisfiable, solution) = match outcome {
        Outcome::Found(d) => {
            let word = (0..d.len()).map(|i| d.symbols(i)[0].to_string()).collect();
            (true, Some(true), Some(word))
        }
        Outcome::Exhausted => (true, Some(false), None),
        Outcome::TimedOut => (false, None, None),
    };
    Ok(SolveResult { solved, satisfiable, choice_points: search.choice_points, wall_time_ms, seed, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;
    use crate::propagators::full_domains;

    fn parens() -> Grammar {
        parse_grammar("S -> S S\nS -> '(' S ')'\nS -> '(' ')'").unwrap()
    }

    #[test]
    fn finds_balanced_string() {
        let mut m = Model::new(full_domains(&["(", ")"], 6));
        m.add_grammar((0..6).collect(), &parens()).unwrap();
        let r = solve(&m, 7, None).unwrap();
        assert!(r.solved);
        let word = r.solution.unwrap().concat();
        let mut depth = 0i32;
        for c in word.chars() {
            depth += if c == '(' { 1 } else { -1 };
            assert!(depth >= 0);
        }
        assert_eq!(depth, 0);
    }

    #[test]
    fn odd_length_is_unsatisfiable_without_search() {
        let mut m = Model::new(full_domains(&["(", ")"], 5));
        m.add_grammar((0..5).collect(), &parens()).unwrap();
        let r = solve(&m, 1, None).unwrap();
        assert_eq!(r.satisfiable, Some(false));
        assert_eq!(r.choice_points, 0);
    }

    #[test]
    fn deterministic_per_seed() {
        let mut m = Model::new(full_domains(&["(", ")"], 8));
        m.add_grammar((0..8).collect(), &parens()).unwrap();
        let a = solve(&m, 42, None).unwrap();
        let b = solve(&m, 42, None).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.choice_points, b.choice_points);
    }

    #[test]
    fn shared_variables_link_constraints() {
        // X0 X1 must be "ab"; X1 X2 must be "ba"
        let mut m = Model::new(full_domains(&["a", "b"], 3));
        m.add_regular(vec![0, 1], &Nfa::exact(&["a", "b"])).unwrap();
        m.add_regular(vec![1, 2], &Nfa::exact(&["b", "a"])).unwrap();
        let mut s = m.initial_state();
        assert!(m.propagate_fixpoint(&mut s).unwrap());
        assert_eq!(s.domains.symbols(2), ["a"]);
        m.add_regular(vec![2], &Nfa::exact(&["b"])).unwrap();
        let r = solve(&m, 0, None).unwrap();
        assert_eq!(r.satisfiable, Some(false));
    }

    #[test]
    fn weighted_bound_tightens() {
        let g = parse_grammar("S -> a [3]\nS -> b [1]").unwrap();
        let mut m = Model::new(full_domains(&["a", "b"], 1));
        m.add_weighted(vec![0], &g, ZBound::at_most(2)).unwrap();
        let mut s = m.initial_state();
        assert!(m.propagate_fixpoint(&mut s).unwrap());
        assert_eq!(s.domains.symbols(0), ["b"]);
        assert_eq!(s.bounds[0], Some(ZBound::new(1, 2)));
    }

    #[test]
    fn timeout_is_reported() {
        let mut m = Model::new(full_domains(&["(", ")"], 12));
        m.add_grammar((0..12).collect(), &parens()).unwrap();
        let r = solve(&m, 3, Some(Duration::ZERO)).unwrap();
        assert!(!r.solved);
        assert_eq!(r.satisfiable, None);
    }

    #[test]
    fn bad_scope() {
        let mut m = Model::new(full_domains(&["a"], 1));
        assert!(m.add_regular(vec![3], &Nfa::exact(&["a"])).is_err());
        assert!(m.add_regular(vec![], &Nfa::exact(&["a"])).is_err());
    }
}
