//! Random edit-distance instances and the two models compared on them.
//!
//! Each instance has two sequences `X # Y^R` and `X' # Y'^R` over `{0,1}`.
//! `Y` and `Y'` are fixed to different random strings, `X` and `X'` must
//! avoid three consecutive ones, each `X` must be within edit distance `N`
//! of its `Y`, and `X`, `X'` share `ceil(0.15 n)` random positions (the same
//! solver variable appears in both sequences).
//!
//! - `conj` posts one `WeightedCFG` per sequence on the grammar that already
//!   includes both regular constraints.
//! - `dec` posts `WeightedCFG` on the plain edit-distance grammar plus
//!   separate `Regular` constraints.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automaton::Nfa;
use crate::domains::{Alphabet, VarDomains, ZBound};
use crate::editdistance::{build_conjunction_grammar, build_edit_grammar, separator_automaton, SENTINEL};
use crate::error::Result;
use crate::grammar::Grammar;
use crate::propagators::{CykPropagator, FastPath};
use crate::solver::{solve, Model, SolveResult};
use crate::transforms::{propagator_cnf, to_linear_normal_form, triple_construction_linear};

const BITS: [&str; 2] = ["0", "1"];

/// Which part of each sequence the "no three consecutive ones" automaton
/// constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum R1Scope {
    #[default]
    XOnly,
    /// All of `X # Y^R`; the separator breaks runs of ones.
    WholeSequence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModelKind {
    #[serde(rename = "conj")]
    Conj,
    #[serde(rename = "dec")]
    Dec,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Conj => "conj",
            ModelKind::Dec => "dec",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ModelKind::Conj => "ED_∧",
            ModelKind::Dec => "ED_Dec",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "conj" => Ok(ModelKind::Conj),
            "dec" => Ok(ModelKind::Dec),
            other => Err(format!("unknown model '{other}' (expected conj or dec)")),
        }
    }
}

/// Three states counting trailing ones; every state accepts.
pub fn no_triple_ones() -> Nfa {
    let arcs = [(0, "0", 0), (1, "0", 0), (2, "0", 0), (0, "1", 1), (1, "1", 2)];
    Nfa::new(3, 0, [0, 1, 2], arcs.map(|(q, a, r)| (q, a.to_string(), r))).expect("valid automaton")
}

/// [`no_triple_ones`] where the separator also resets the count.
fn no_triple_ones_with_separator() -> Nfa {
    let mut arcs: Vec<(usize, String, usize)> = no_triple_ones().transitions().to_vec();
    arcs.extend((0..3).map(|q| (q, SENTINEL.to_string(), 0)));
    Nfa::new(3, 0, [0, 1, 2], arcs).expect("valid automaton")
}

/// One sequence `X # Y^R` of an instance.
#[derive(Debug, Clone)]
pub struct Sequence {
    /// The target string for `Y`.
    pub y: Vec<String>,
    /// Solver variables of `X1..Xn # Yn..Y1`.
    pub scope: Vec<usize>,
}

impl Sequence {
    pub fn x_scope(&self) -> &[usize] {
        &self.scope[..self.y.len()]
    }

    /// `Y1..Yn` in natural order.
    pub fn y_scope(&self) -> Vec<usize> {
        self.scope[self.y.len() + 1..].iter().rev().copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub max_dist: u64,
    pub seed: u64,
    pub r1_scope: R1Scope,
    pub sequences: [Sequence; 2],
    /// Positions of `X` that are the same variable in `X'`.
    pub shared: Vec<usize>,
    pub conj: Model,
    pub dec: Model,
    /// Time spent building and compiling grammars.
    pub compile_ms: f64,
}

impl Instance {
    pub fn model(&self, kind: ModelKind) -> &Model {
        match kind {
            ModelKind::Conj => &self.conj,
            ModelKind::Dec => &self.dec,
        }
    }

    pub fn variables(&self) -> usize {
        self.conj.domains().len()
    }
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<String> {
    (0..n).map(|_| BITS[rng.gen_range(0..2)].to_string()).collect()
}

/// `G_∧` for one sequence. With `R1Scope::WholeSequence` the automaton is
/// the separator automaton intersected with the whole-sequence `R1`.
fn conjunction_for(g_ed: &Grammar, y: &[String], r1_scope: R1Scope) -> Result<Grammar> {
    let r2 = Nfa::exact(y);
    match r1_scope {
        R1Scope::XOnly => build_conjunction_grammar(&no_triple_ones(), &r2, g_ed),
        R1Scope::WholeSequence => {
            let aut = separator_automaton(&Nfa::universal(&BITS), &r2).intersect(&no_triple_ones_with_separator());
            triple_construction_linear(&to_linear_normal_form(g_ed)?, &aut)
        }
    }
}

fn compile(g: &Grammar) -> Result<Arc<CykPropagator>> {
    Ok(Arc::new(CykPropagator::new(&propagator_cnf(g), FastPath::Auto)?))
}

/// Builds both models of one random instance. Requires `n >= 2`.
pub fn generate_instance(n: usize, max_dist: u64, seed: u64, r1_scope: R1Scope) -> Result<Instance> {
    assert!(n >= 2, "instances need n >= 2");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = random_bits(&mut rng, n);
    let mut y2 = random_bits(&mut rng, n);
    while y2 == y {
        y2 = random_bits(&mut rng, n);
    }
    // ceil(0.15 n)
    let mut shared = sample(&mut rng, n, (3 * n).div_ceil(20)).into_vec();
    shared.sort_unstable();

    // variable layout: sequence one as is, then the unshared part of two
    let len = 2 * n + 1;
    let first: Vec<usize> = (0..len).collect();
    let mut next = len;
    let mut second = Vec::with_capacity(len);
    for i in 0..len {
        if i < n && shared.binary_search(&i).is_ok() {
            second.push(i);
        } else {
            second.push(next);
            next += 1;
        }
    }
    let mut names: Vec<String> = Vec::with_capacity(next);
    let mut values: Vec<Vec<&str>> = Vec::with_capacity(next);
    for (prime, scope) in [("", &first), ("'", &second)] {
        for (i, &v) in scope.iter().enumerate() {
            if v < names.len() {
                continue;
            }
            let (name, dom) = match i {
                i if i < n => (format!("X{prime}{}", i + 1), BITS.to_vec()),
                i if i == n => (format!("{SENTINEL}{prime}"), vec![SENTINEL]),
                i => (format!("Y{prime}{}", len - i), BITS.to_vec()),
            };
            names.push(name);
            values.push(dom);
        }
    }
    let alphabet = Arc::new(Alphabet::new(["0", "1", SENTINEL]));
    let domains = VarDomains::from_values(alphabet, &values)?.with_names(names)?;
    let sequences = [Sequence { y, scope: first }, Sequence { y: y2, scope: second }];
    let bound = ZBound::at_most(max_dist);

    let started = Instant::now();
    let g_ed = build_edit_grammar(&BITS, &BITS)?;
    let ed = compile(&g_ed)?;
    let mut conj = Model::new(domains.clone());
    let mut dec = Model::new(domains);
    for s in &sequences {
        conj.add_compiled_weighted(s.scope.clone(), compile(&conjunction_for(&g_ed, &s.y, r1_scope)?)?, bound)?;
        dec.add_compiled_weighted(s.scope.clone(), ed.clone(), bound)?;
    }
    for s in &sequences {
        match r1_scope {
            R1Scope::XOnly => dec.add_regular(s.x_scope().to_vec(), &no_triple_ones())?,
            R1Scope::WholeSequence => dec.add_regular(s.scope.clone(), &no_triple_ones_with_separator())?,
        }
        dec.add_regular(s.y_scope(), &Nfa::exact(&s.y))?;
    }
    let compile_ms = started.elapsed().as_secs_f64() * 1000.0;
    Ok(Instance { n, max_dist, seed, r1_scope, sequences, shared, conj, dec, compile_ms })
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// `(n, N)` pairs.
    pub rows: Vec<(usize, u64)>,
    pub instances: usize,
    pub timeout: Duration,
    pub seed: u64,
    pub models: Vec<ModelKind>,
    pub r1_scope: R1Scope,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            rows: vec![(15, 2), (20, 2), (25, 3)],
            instances: 20,
            timeout: Duration::from_secs(60),
            seed: 42,
            models: vec![ModelKind::Conj, ModelKind::Dec],
            r1_scope: R1Scope::XOnly,
        }
    }
}

/// Seed of instance `i` in row `(n, N)`.
pub fn instance_seed(base: u64, n: usize, max_dist: u64, i: usize) -> u64 {
    base.wrapping_add(100_000 * n as u64 + 1_000 * max_dist + i as u64)
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub n: usize,
    #[serde(rename = "N")]
    pub max_dist: u64,
    pub seed: u64,
    pub model: ModelKind,
    pub solved: bool,
    pub satisfiable: Option<bool>,
    pub choice_points: u64,
    pub time_ms: f64,
}

/// Solved count and means for one model on one row.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub solved: usize,
    pub total: usize,
    /// Means over solved instances; `None` when nothing was solved.
    pub mean_choice_points: Option<f64>,
    pub mean_time_ms: Option<f64>,
}

impl Summary {
    fn of<'a>(records: impl Iterator<Item = &'a Record>) -> Summary {
        let mut s = Summary::default();
        let (mut cp, mut ms) = (0.0, 0.0);
        for r in records {
            s.total += 1;
            if r.solved {
                s.solved += 1;
                cp += r.choice_points as f64;
                ms += r.time_ms;
            }
        }
        if s.solved > 0 {
            s.mean_choice_points = Some(cp / s.solved as f64);
            s.mean_time_ms = Some(ms / s.solved as f64);
        }
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub models: Vec<ModelKind>,
    pub rows: Vec<(usize, u64)>,
    pub records: Vec<Record>,
}

impl BenchReport {
    pub fn summary(&self, n: usize, max_dist: u64, model: ModelKind) -> Summary {
        Summary::of(self.records.iter().filter(|r| r.n == n && r.max_dist == max_dist && r.model == model))
    }

    pub fn totals(&self, model: ModelKind) -> Summary {
        Summary::of(self.records.iter().filter(|r| r.model == model))
    }

    /// Instances solved by every model whose verdicts differ.
    pub fn disagreements(&self) -> Vec<(usize, u64, u64)> {
        let mut out = Vec::new();
        for r in &self.records {
            let clash = self.records.iter().any(|o| {
                o.seed == r.seed && o.model > r.model && r.solved && o.solved && o.satisfiable != r.satisfiable
            });
            if clash {
                out.push((r.n, r.max_dist, r.seed));
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let fmt = |x: Option<f64>, digits: usize| x.map_or("-".to_string(), |v| format!("{v:.digits$}"));
        let mut head = String::from("| n | N |");
        let mut rule = String::from("|---|---|");
        for m in &self.models {
            let l = m.label();
            head.push_str(&format!(" {l} #solved | {l} #choice points | {l} time (s) |"));
            rule.push_str("---|---|---|");
        }
        let mut out = format!("{head}\n{rule}\n");
        for &(n, max_dist) in &self.rows {
            out.push_str(&format!("| {n} | {max_dist} |"));
            for &m in &self.models {
                let s = self.summary(n, max_dist, m);
                out.push_str(&format!(
                    " {} | {} | {} |",
                    s.solved,
                    fmt(s.mean_choice_points, 1),
                    fmt(s.mean_time_ms.map(|t| t / 1000.0), 3)
                ));
            }
            out.push('\n');
        }
        out.push_str("\n**TOTALS**\n\n| model | solved/total | avg time for solved (s) | avg choice points for solved |\n|---|---|---|---|\n");
        for &m in &self.models {
            let s = self.totals(m);
            out.push_str(&format!(
                "| {} | {}/{} | {} | {} |\n",
                m.label(),
                s.solved,
                s.total,
                fmt(s.mean_time_ms.map(|t| t / 1000.0), 3),
                fmt(s.mean_choice_points, 1)
            ));
        }
        out
    }

    pub fn to_csv(&self) -> std::result::Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn record(inst: &Instance, model: ModelKind, r: &SolveResult) -> Record {
    Record {
        n: inst.n,
        max_dist: inst.max_dist,
        seed: inst.seed,
        model,
        solved: r.solved,
        satisfiable: r.satisfiable,
        choice_points: r.choice_points,
        time_ms: r.wall_time_ms,
    }
}

/// Runs every row sequentially. `progress` sees each record as it lands.
pub fn run_bench(config: &BenchConfig, mut progress: impl FnMut(&Record)) -> Result<BenchReport> {
    let mut report = BenchReport { models: config.models.clone(), rows: config.rows.clone(), records: Vec::new() };
    for &(n, max_dist) in &config.rows {
        for i in 0..config.instances {
            let seed = instance_seed(config.seed, n, max_dist, i);
            let inst = generate_instance(n, max_dist, seed, config.r1_scope)?;
            for &m in &config.models {
                let r = solve(inst.model(m), seed, Some(config.timeout))?;
                let rec = record(&inst, m, &r);
                progress(&rec);
                report.records.push(rec);
            }
        }
    }
    Ok(report)
}
