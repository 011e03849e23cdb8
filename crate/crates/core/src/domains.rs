//! Variable domains over a shared alphabet, plus their JSON form.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weight value used for +∞.
pub const INFINITY: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    /// Duplicates are dropped; first occurrence fixes the index.
    pub fn new<I, S>(symbols: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut a = Alphabet::default();
        for s in symbols {
            a.insert(s.as_ref());
        }
        a
    }

    pub fn insert(&mut self, symbol: &str) -> usize {
        if let Some(&i) = self.index.get(symbol) {
            return i;
        }
        let i = self.symbols.len();
        self.symbols.push(symbol.to_string());
        self.index.insert(symbol.to_string(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, symbol: &str) -> Option<usize> {
        self.index.get(symbol).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
}

/// Bounds on the weight variable of a weighted grammar constraint.
/// `ub == INFINITY` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZBound {
    pub lb: u64,
    pub ub: u64,
}

impl ZBound {
    pub fn new(lb: u64, ub: u64) -> Self {
        ZBound { lb, ub }
    }

    pub fn at_most(ub: u64) -> Self {
        ZBound { lb: 0, ub }
    }

    pub fn unbounded() -> Self {
        ZBound { lb: 0, ub: INFINITY }
    }

    pub fn is_empty(&self) -> bool {
        self.lb > self.ub
    }
}

/// Result of a propagator: either filtered state or disentailment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filtered<T> {
    Consistent(T),
    Disentailed,
}

impl<T> Filtered<T> {
    pub fn is_disentailed(&self) -> bool {
        matches!(self, Filtered::Disentailed)
    }

    pub fn consistent(self) -> Option<T> {
        match self {
            Filtered::Consistent(t) => Some(t),
            Filtered::Disentailed => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Filtered<U> {
        match self {
            Filtered::Consistent(t) => Filtered::Consistent(f(t)),
            Filtered::Disentailed => Filtered::Disentailed,
        }
    }
}

/// An ordered sequence of finite domains, all over one alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct VarDomains {
    alphabet: Arc<Alphabet>,
    names: Vec<String>,
    sets: Vec<FixedBitSet>,
}

impl VarDomains {
    /// Every variable gets the full alphabet. Names default to `X1..Xn`.
    pub fn full(alphabet: Arc<Alphabet>, n: usize) -> Self {
        let mut all = FixedBitSet::with_capacity(alphabet.len());
        all.insert_range(..);
        VarDomains { names: default_names(n), sets: vec![all; n], alphabet }
    }

    pub fn from_values<S: AsRef<str>>(alphabet: Arc<Alphabet>, values: &[Vec<S>]) -> Result<Self> {
        let mut sets = Vec::with_capacity(values.len());
        for vs in values {
            let mut set = FixedBitSet::with_capacity(alphabet.len());
            for v in vs {
                let i = alphabet.get(v.as_ref()).ok_or_else(|| Error::ForeignTerminal(v.as_ref().to_string()))?;
                set.insert(i);
            }
            sets.push(set);
        }
        Ok(VarDomains { names: default_names(values.len()), sets, alphabet })
    }

    /// Builds domains from value lists, deriving the alphabet from the values
    /// in order of first appearance.
    pub fn from_lists<S: AsRef<str>>(values: &[Vec<S>]) -> Self {
        let alphabet = Alphabet::new(values.iter().flatten().map(|s| s.as_ref().to_string()));
        Self::from_values(Arc::new(alphabet), values).expect("alphabet covers values")
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.sets.len() {
            return Err(Error::LengthMismatch { expected: self.sets.len(), got: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, i: usize) -> &FixedBitSet {
        &self.sets[i]
    }

    pub fn contains(&self, i: usize, value: usize) -> bool {
        self.sets[i].contains(value)
    }

    pub fn contains_symbol(&self, i: usize, symbol: &str) -> bool {
        self.alphabet.get(symbol).is_some_and(|v| self.sets[i].contains(v))
    }

    pub fn values(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.sets[i].ones()
    }

    pub fn symbols(&self, i: usize) -> Vec<&str> {
        self.sets[i].ones().map(|v| self.alphabet.name(v)).collect()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sets[i].count_ones(..)
    }

    pub fn is_assigned(&self, i: usize) -> bool {
        self.size(i) == 1
    }

    /// True when some domain is empty.
    pub fn is_failed(&self) -> bool {
        self.sets.iter().any(|s| s.is_clear())
    }

    pub fn is_subset_of(&self, other: &VarDomains) -> bool {
        self.len() == other.len() && self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }

    /// `Π |D(Xi)|`, saturating.
    pub fn product_size(&self) -> u128 {
        self.sets
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.count_ones(..) as u128))
    }

    /// Intersects domain `i` with `set`; returns whether it shrank.
    pub fn restrict(&mut self, i: usize, set: &FixedBitSet) -> bool {
        let before = self.sets[i].count_ones(..);
        self.sets[i].intersect_with(set);
        self.sets[i].count_ones(..) != before
    }

    pub fn replace(&mut self, i: usize, set: FixedBitSet) {
        self.sets[i] = set;
    }

    pub fn assign(&mut self, i: usize, value: usize) {
        let keep = self.sets[i].contains(value);
        self.sets[i].clear();
        if keep {
            self.sets[i].insert(value);
        }
    }

    pub fn remove(&mut self, i: usize, value: usize) {
        self.sets[i].set(value, false);
    }

    /// The domains of the listed variables, in scope order.
    pub fn project(&self, scope: &[usize]) -> VarDomains {
        VarDomains {
            alphabet: self.alphabet.clone(),
            names: scope.iter().map(|&v| self.names[v].clone()).collect(),
            sets: scope.iter().map(|&v| self.sets[v].clone()).collect(),
        }
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.alphabet.len())
    }

    /// Reads the domain JSON format. The alphabet is `extra` followed by
    /// every value in order of appearance.
    pub fn from_json(text: &str, extra: &[String]) -> Result<Self> {
        let file: DomainFile = serde_json::from_str(text).map_err(|e| Error::DomainFile(e.to_string()))?;
        let mut alphabet = Alphabet::new(extra);
        for v in &file.vars {
            for value in &v.domain {
                alphabet.insert(value);
            }
        }
        let values: Vec<Vec<String>> = file.vars.iter().map(|v| v.domain.clone()).collect();
        let names = file.vars.iter().map(|v| v.name.clone()).collect();
        Self::from_values(Arc::new(alphabet), &values)?.with_names(names)
    }

    pub fn to_file(&self) -> DomainFile {
        DomainFile {
            vars: (0..self.len())
                .map(|i| VarEntry {
                    name: self.names[i].clone(),
                    domain: self.symbols(i).into_iter().map(String::from).collect(),
                })
                .collect(),
        }
    }
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

impl fmt::Debug for VarDomains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.len() {
            list.entry(&self.symbols(i));
        }
        list.finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarEntry {
    pub name: String,
    pub domain: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainFile {
    pub vars: Vec<VarEntry>,
}
