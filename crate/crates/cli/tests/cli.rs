use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn gramprop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gramprop")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn domains(out: &Value) -> Vec<Vec<String>> {
    out["vars"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["domain"].as_array().unwrap().iter().map(|a| a.as_str().unwrap().to_string()).collect())
        .collect()
}

const PARENS: &str = "# balanced parentheses\nS -> S S\nS -> '(' S ')'\nS -> '(' ')'\n";

fn full(n: usize, values: &[&str]) -> String {
    let vars: Vec<String> = (1..=n)
        .map(|i| format!(r#"{{"name": "X{i}", "domain": {}}}"#, serde_json::to_string(values).unwrap()))
        .collect();
    format!(r#"{{"vars": [{}]}}"#, vars.join(", "))
}

#[test]
fn transform_to_cnf_and_back() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> a b\n");
    let text = stdout(&gramprop(&["transform", "--grammar", s(&g), "--to", "cnf"]));
    assert!(text.contains("S -> Y_a Y_b"), "{text}");
    let cnf = write(&dir, "cnf.txt", &text);
    let again = stdout(&gramprop(&["transform", "--grammar", s(&cnf), "--to", "trim"]));
    assert_eq!(again, text);
}

#[test]
fn transform_rejects_nonlinear() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> S S\nS -> a\n");
    let out = gramprop(&["transform", "--grammar", s(&g), "--to", "linear-nf"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("linear"));
}

#[test]
fn syntax_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> a\nS -> \n");
    let out = gramprop(&["transform", "--grammar", s(&g), "--to", "cnf"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains('2'));
}

#[test]
fn classify_flags() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> a S\nS -> b\n");
    let out = json(&gramprop(&["classify", "--grammar", s(&g)]));
    assert_eq!(out["regular"], true);
    assert_eq!(out["simple"], true);
    assert_eq!(out["fixed_growth"], serde_json::json!([1, 0]));
}

#[test]
fn propagate_parens() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", PARENS);
    let d = write(&dir, "d.json", &full(4, &["(", ")"]));
    let out = json(&gramprop(&["propagate", "--grammar", s(&g), "--domains", s(&d)]));
    assert_eq!(out["status"], "ok");
    assert_eq!(domains(&out), [vec!["("], vec!["(", ")"], vec!["(", ")"], vec![")"]]);
    assert!(out.get("lb_z").is_none());

    let d = write(&dir, "odd.json", &full(3, &["(", ")"]));
    let out = json(&gramprop(&["propagate", "--grammar", s(&g), "--domains", s(&d)]));
    assert_eq!(out["status"], "disentailed");

    let out = gramprop(&["propagate", "--grammar", s(&g), "--domains", s(&d), "--linear-fast-path", "on"]);
    assert!(!out.status.success());
}

#[test]
fn propagate_weighted() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> a [3]\nS -> b [1]\n");
    let d = write(&dir, "d.json", &full(1, &["a", "b"]));
    let out = json(&gramprop(&["propagate", "--grammar", s(&g), "--domains", s(&d), "--ub-z", "2"]));
    assert_eq!(out["status"], "ok");
    assert_eq!(out["lb_z"], 1);
    assert_eq!(domains(&out), [vec!["b"]]);

    for mode in ["on", "off", "auto"] {
        let out = json(&gramprop(&[
            "propagate", "--grammar", s(&g), "--domains", s(&d), "--ub-z", "5", "--linear-fast-path", mode,
        ]));
        assert_eq!(domains(&out), [vec!["a", "b"]]);
    }
}

#[test]
fn reduce_both_ways() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "S -> a S\nS -> b\n");
    let text = stdout(&gramprop(&["reduce", "--grammar", s(&g), "--string", "ab", "--mode", "thm1"]));
    let (grammar, doms) = text.split_once("---\n").unwrap();
    assert!(grammar.contains("S -> '(a,1)' S") || grammar.contains("S -> (a,1) S"), "{grammar}");
    let doms: Value = serde_json::from_str(doms).unwrap();
    assert_eq!(domains(&doms), [vec!["(a,1)"], vec!["(b,2)"]]);

    let d = write(&dir, "d.json", r#"{"vars": [{"name": "X1", "domain": ["a", "b"]}, {"name": "X2", "domain": ["b"]}]}"#);
    let text = stdout(&gramprop(&["reduce", "--grammar", s(&g), "--domains", s(&d), "--mode", "thm2"]));
    let (grammar, bits) = text.split_once("---\n").unwrap();
    assert_eq!(bits.trim(), "1101");
    assert!(grammar.contains("T_1 -> 1 B"));

    let out = gramprop(&["reduce", "--grammar", s(&g), "--mode", "thm1"]);
    assert!(!out.status.success());
}

#[test]
fn editdist_modes() {
    let dir = TempDir::new().unwrap();
    let x = write(&dir, "x.json", &full(3, &["0", "1"]));
    let y = write(
        &dir,
        "y.json",
        r#"{"vars": [{"name": "Y1", "domain": ["1"]}, {"name": "Y2", "domain": ["1"]}, {"name": "Y3", "domain": ["1"]}]}"#,
    );
    let r1 = write(
        &dir,
        "r1.json",
        r#"{"states": 3, "initial": 0, "accepting": [0, 1, 2], "transitions": [[0, "0", 0], [1, "0", 0], [2, "0", 0], [0, "1", 1], [1, "1", 2]]}"#,
    );
    let r2 = write(&dir, "r2.json", r#"{"states": 1, "initial": 0, "accepting": [0], "transitions": [[0, "0", 0], [0, "1", 0]]}"#);
    let base = ["editdist", "--x-domains", s(&x), "--y-domains", s(&y), "--r1", s(&r1), "--r2", s(&r2)];

    // X within distance 0 of 111 but no 111 factor: impossible
    let out = json(&gramprop(&[&base[..], &["--max-dist", "0", "--mode", "conj"]].concat()));
    assert_eq!(out["status"], "disentailed");

    // distance 1: X has exactly one 0, and the conjunction sees it
    let conj = json(&gramprop(&[&base[..], &["--max-dist", "1", "--mode", "conj", "--solve"]].concat()));
    assert_eq!(conj["status"], "ok");
    assert_eq!(conj["satisfiable"], true);
    assert_eq!(conj["lb_z"], 1);
    let x_sol: Vec<&str> = conj["solution"]["x"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(x_sol.iter().filter(|&&a| a == "0").count(), 1);
    assert_eq!(domains(&conj).len(), 7);

    let dec = json(&gramprop(&[&base[..], &["--max-dist", "1", "--mode", "dec", "--solve"]].concat()));
    assert_eq!(dec["status"], "ok");
    assert_eq!(dec["satisfiable"], true);
}

#[test]
fn bench_writes_table_and_csv() {
    let dir = TempDir::new().unwrap();
    let table = dir.path().join("table.md");
    let out = gramprop(&[
        "bench", "--rows", "5:1,6:1", "--instances", "2", "--timeout-ms", "10000", "--seed", "3", "--out", s(&table),
    ]);
    stdout(&out);
    let md = fs::read_to_string(&table).unwrap();
    assert!(md.contains("| 5 | 1 |") && md.contains("| 6 | 1 |") && md.contains("TOTALS"));
    let csv = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,N,seed,model,solved,satisfiable,choice_points,time_ms");
    assert_eq!(lines.count(), 8);

    let out = gramprop(&["bench", "--rows", "5:1", "--models", "conj,nope"]);
    assert!(!out.status.success());
}
