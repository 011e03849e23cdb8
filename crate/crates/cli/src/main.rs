use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gramprop::bench::{run_bench, BenchConfig, ModelKind, R1Scope};
use gramprop::editdistance::{build_conjunction_grammar, build_edit_grammar, encode_edit_instance, EditInstance};
use gramprop::propagators::{CykPropagator, FastPath};
use gramprop::solver::{solve, Model};
use gramprop::transforms::{
    bitmap_reduction, propagator_cnf, simple_grammar_reduction, to_cnf, to_linear_normal_form, trim,
};
use gramprop::{classify, parse_grammar, serialize_grammar, Filtered, Grammar, Nfa, VarDomains, ZBound};

#[derive(Parser)]
#[command(name = "gramprop", version, about = "Grammar constraint propagation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Cnf,
    LinearNf,
    Trim,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceMode {
    /// Membership in a Greibach grammar as support over a simple grammar.
    Thm1,
    /// Support as membership of a bitmap string.
    Thm2,
}

#[derive(Clone, Copy, ValueEnum)]
enum FastPathArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum EditMode {
    Conj,
    Dec,
}

#[derive(Clone, Copy, ValueEnum)]
enum R1ScopeArg {
    X,
    Whole,
}

#[derive(Subcommand)]
enum Command {
    /// Print the grammar's class flags.
    Classify {
        #[arg(long)]
        grammar: PathBuf,
    },
    /// Normalize a grammar.
    Transform {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Run one of the two support/membership reductions. Prints the new
    /// grammar, a `---` line, then the domain JSON (thm1) or bitmap (thm2).
    Reduce {
        #[arg(long)]
        grammar: PathBuf,
        /// Space-separated tokens, or one token per character.
        #[arg(long, conflicts_with = "domains")]
        string: Option<String>,
        #[arg(long)]
        domains: Option<PathBuf>,
        #[arg(long, value_enum)]
        mode: ReduceMode,
    },
    /// Filter domains against a (weighted) grammar constraint.
    Propagate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        domains: PathBuf,
        /// Upper bound on the derivation weight; makes the constraint weighted.
        #[arg(long)]
        ub_z: Option<u64>,
        #[arg(long, value_enum, default_value = "auto")]
        linear_fast_path: FastPathArg,
    },
    /// Propagate (and optionally solve) EditDistance(X, Y, N) with regular
    /// constraints on X and Y.
    Editdist {
        #[arg(long)]
        x_domains: PathBuf,
        #[arg(long)]
        y_domains: PathBuf,
        #[arg(long)]
        max_dist: u64,
        /// Automaton for X; accepts everything by default.
        #[arg(long)]
        r1: Option<PathBuf>,
        /// Automaton for Y; accepts everything by default.
        #[arg(long)]
        r2: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "conj")]
        mode: EditMode,
        /// Also search for a solution.
        #[arg(long)]
        solve: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the conjunction and decomposition models on random instances.
    Bench {
        /// Comma-separated n:N pairs.
        #[arg(long, default_value = "15:2,20:2,25:3")]
        rows: String,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "conj,dec")]
        models: String,
        #[arg(long, value_enum, default_value = "x")]
        r1_scope: R1ScopeArg,
        /// Markdown table path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-instance CSV path; defaults to the table path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_grammar(path: &Path) -> Result<Grammar> {
    parse_grammar(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_domains(path: &Path) -> Result<VarDomains> {
    VarDomains::from_json(&read(path)?, &[]).with_context(|| format!("parsing {}", path.display()))
}

fn read_automaton(path: &Path) -> Result<Nfa> {
    Nfa::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn tokens(s: &str) -> Vec<String> {
    if s.split_whitespace().count() > 1 {
        s.split_whitespace().map(String::from).collect()
    } else {
        s.chars().map(String::from).collect()
    }
}

fn distinct_values(d: &VarDomains) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for i in 0..d.len() {
        for v in d.symbols(i) {
            if !out.iter().any(|o| o == v) {
                out.push(v.to_string());
            }
        }
    }
    out
}

fn domains_json(d: &VarDomains) -> Value {
    serde_json::to_value(d.to_file()).expect("domain file serializes")
}

/// Domain JSON of `d`, with every domain emptied when `d` is `None`.
fn report(d: &VarDomains, pruned: Option<&VarDomains>, bound: Option<ZBound>) -> Value {
    let mut out = match pruned {
        Some(p) => domains_json(p),
        None => {
            let mut empty = d.clone();
            for i in 0..empty.len() {
                empty.replace(i, d.empty_set());
            }
            domains_json(&empty)
        }
    };
    out["status"] = json!(if pruned.is_some() { "ok" } else { "disentailed" });
    if let (Some(z), Some(_)) = (bound, pruned) {
        out["lb_z"] = json!(z.lb);
    }
    out
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { grammar } => {
            let c = classify(&read_grammar(&grammar)?);
            let out = json!({
                "regular": c.is_regular,
                "linear": c.is_linear,
                "greibach": c.is_greibach,
                "simple": c.is_simple,
                "cnf": c.is_cnf,
                "fixed_growth": c.fixed_growth,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Transform { grammar, to } => {
            let g = read_grammar(&grammar)?;
            let out = match to {
                Target::Cnf => to_cnf(&g),
                Target::LinearNf => to_linear_normal_form(&g)?,
                Target::Trim => trim(&g),
            };
            print!("{}", serialize_grammar(&out));
        }
        Command::Reduce { grammar, string, domains, mode } => {
            let g = read_grammar(&grammar)?;
            match mode {
                ReduceMode::Thm1 => {
                    let s = string.context("thm1 needs --string")?;
                    let r = simple_grammar_reduction(&g, &tokens(&s))?;
                    print!("{}", serialize_grammar(&r.grammar));
                    println!("---");
                    println!("{}", serde_json::to_string_pretty(&r.domains.to_file())?);
                }
                ReduceMode::Thm2 => {
                    let path = domains.context("thm2 needs --domains")?;
                    let r = bitmap_reduction(&g, &read_domains(&path)?)?;
                    print!("{}", serialize_grammar(&r.grammar));
                    println!("---");
                    println!("{}", r.bits());
                }
            }
        }
        Command::Propagate { grammar, domains, ub_z, linear_fast_path } => {
            let g = read_grammar(&grammar)?;
            let d = read_domains(&domains)?;
            let mode = match linear_fast_path {
                FastPathArg::Auto => FastPath::Auto,
                FastPathArg::On => FastPath::On,
                FastPathArg::Off => FastPath::Off,
            };
            let p = CykPropagator::new(&propagator_cnf(&g), mode)?;
            let out = if g.is_weighted() || ub_z.is_some() {
                let z = ub_z.map_or_else(ZBound::unbounded, ZBound::at_most);
                match p.propagate_weighted(&d, z)? {
                    Filtered::Consistent((pruned, z)) => report(&d, Some(&pruned), Some(z)),
                    Filtered::Disentailed => report(&d, None, None),
                }
            } else {
                match p.propagate(&d)? {
                    Filtered::Consistent(pruned) => report(&d, Some(&pruned), None),
                    Filtered::Disentailed => report(&d, None, None),
                }
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Editdist { x_domains, y_domains, max_dist, r1, r2, mode, solve: want_solution, seed } => {
            let dx = read_domains(&x_domains)?;
            let dy = read_domains(&y_domains)?;
            if dx.len() != dy.len() {
                bail!("X has {} variables but Y has {}", dx.len(), dy.len());
            }
            let (ax, ay) = (distinct_values(&dx), distinct_values(&dy));
            let inst = EditInstance::new(dx.len(), &ax, &ay, max_dist)?;
            let (z, bound) = encode_edit_instance(&inst, &dx, &dy)?;
            let r1 = r1.map_or_else(|| Ok(Nfa::universal(&ax)), |p| read_automaton(&p))?;
            let r2 = r2.map_or_else(|| Ok(Nfa::universal(&ay)), |p| read_automaton(&p))?;
            let g_ed = build_edit_grammar(&ax, &ay)?;
            let n = inst.n;
            let mut model = Model::new(z.clone());
            match mode {
                EditMode::Conj => {
                    let g = build_conjunction_grammar(&r1, &r2, &g_ed)?;
                    model.add_weighted((0..z.len()).collect(), &g, bound)?;
                }
                EditMode::Dec => {
                    model.add_weighted((0..z.len()).collect(), &g_ed, bound)?;
                    model.add_regular((0..n).collect(), &r1)?;
                    model.add_regular((n + 1..z.len()).rev().collect(), &r2)?;
                }
            }
            let mut state = model.initial_state();
            let ok = model.propagate_fixpoint(&mut state)?;
            let mut out = if ok { report(&z, Some(&state.domains), state.bounds[0]) } else { report(&z, None, None) };
            if want_solution {
                let r = solve(&model, seed, None)?;
                out["satisfiable"] = json!(r.satisfiable);
                out["choice_points"] = json!(r.choice_points);
                if let Some(word) = r.solution {
                    out["solution"] = json!({ "x": word[..n], "y": word[n + 1..].iter().rev().collect::<Vec<_>>() });
                }
            }
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Bench { rows, instances, timeout_ms, seed, models, r1_scope, out, csv } => {
            let rows = parse_rows(&rows)?;
            let models = models
                .split(',')
                .map(|m| m.trim().parse::<ModelKind>().map_err(anyhow::Error::msg))
                .collect::<Result<Vec<_>>>()?;
            let config = BenchConfig {
                rows,
                instances,
                timeout: Duration::from_millis(timeout_ms),
                seed,
                models,
                r1_scope: match r1_scope {
                    R1ScopeArg::X => R1Scope::XOnly,
                    R1ScopeArg::Whole => R1Scope::WholeSequence,
                },
            };
            let report = run_bench(&config, |r| {
                eprintln!(
                    "n={} N={} seed={} {}: solved={} sat={:?} cp={} {:.1}ms",
                    r.n,
                    r.max_dist,
                    r.seed,
                    r.model.name(),
                    r.solved,
                    r.satisfiable,
                    r.choice_points,
                    r.time_ms
                )
            })?;
            let table = report.to_markdown();
            let csv_path = csv.or_else(|| out.as_ref().map(|p| p.with_extension("csv")));
            match &out {
                Some(p) => fs::write(p, &table).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{table}"),
            }
            if let Some(p) = csv_path {
                fs::write(&p, report.to_csv()?).with_context(|| format!("writing {}", p.display()))?;
            }
        }
    }
    Ok(())
}

fn parse_rows(s: &str) -> Result<Vec<(usize, u64)>> {
    s.split(',')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            let (n, d) = r.trim().split_once(':').with_context(|| format!("row '{r}' is not n:N"))?;
            let n: usize = n.parse().with_context(|| format!("bad n in '{r}'"))?;
            if n < 2 {
                bail!("row '{r}': n must be at least 2");
            }
            Ok((n, d.parse().with_context(|| format!("bad N in '{r}'"))?))
        })
        .collect()
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
