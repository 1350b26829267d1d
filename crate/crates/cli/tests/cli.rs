use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn kmd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmd"))
        .current_dir(dir)
        .env_remove("KMD_CACHE_DIR")
        .args(args)
        .output()
        .expect("kmd runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn builtin(dir: &Path, file: &str, args: &[&str]) -> PathBuf {
    let mut all = vec!["builtin"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", file]);
    let o = kmd(dir, &all);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    dir.join(file)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn elems(text: &str) -> usize {
    text.lines().filter(|l| l.starts_with("elem ")).count()
}

#[test]
fn builtin_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], usize); 3] = [
        (&["builtin", "sym", "--dim", "2", "--max-weight", "4"], 15),
        (&["builtin", "ce", "--lie", "sl2"], 8),
        (&["builtin", "envelope", "--lie", "sl2", "--N", "2"], 10),
    ];
    for (args, n) in cases {
        let o = kmd(dir.path(), args);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(elems(&stdout(&o)), n, "{args:?}");
    }
}

#[test]
fn builtins_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let families: [&[&str]; 9] = [
        &["sym", "--dim", "2", "--max-weight", "3"],
        &["ext-coalgebra", "--dim", "2"],
        &["ext-algebra", "--dim", "2"],
        &["dual-numbers"],
        &["ce", "--lie", "nonabelian2"],
        &["envelope", "--lie", "sl2", "--N", "2"],
        &["lie", "--lie", "sl2"],
        &["ground-algebra"],
        &["ground-coalgebra"],
    ];
    for (i, args) in families.iter().enumerate() {
        let name = format!("f{i}.txt");
        let path = builtin(dir.path(), &name, args);
        let first = std::fs::read_to_string(&path).unwrap();
        let v = kmd(dir.path(), &["validate", &name, "--format", "json"]);
        assert_eq!(v.status.code(), Some(0), "{args:?}: {}", stdout(&v));
        let again = kmd(dir.path(), &["validate", &name, "--format", "json"]);
        assert_eq!(v.stdout, again.stdout);
        let copy = dir.path().join(format!("g{i}.txt"));
        std::fs::write(&copy, &first).unwrap();
        let w = kmd(dir.path(), &["validate", copy.to_str().unwrap(), "--format", "json"]);
        assert_eq!(json(&v)["report"], json(&w)["report"]);
    }
}

#[test]
fn twist_check_of_the_projection() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "2"]);
    builtin(dir.path(), "a.txt", &["sym", "--dim", "2", "--max-weight", "4"]);
    let o = kmd(dir.path(), &["twist-check", "c.txt", "a.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));

    // a τ that hits the unit is not augmented
    std::fs::write(dir.path().join("t.txt"), "field Q\nkind tau\ntau v1 1 1\n").unwrap();
    let o = kmd(dir.path(), &["twist-check", "c.txt", "a.txt", "t.txt"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: FAIL"));
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn hh_of_the_line_matches_polyvectors() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "e.txt", &["ext-coalgebra", "--dim", "1"]);
    let o = kmd(dir.path(), &["hh", "e.txt", "--window", "0..2,0..4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let cells = v["report"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 15);
    for c in cells {
        let d = c["bidegree"]["degree"].as_i64().unwrap() as usize;
        let w = c["bidegree"]["weight"].as_i64().unwrap();
        // polyvectors on a line: x^(w+d) ∂^d with d ≤ 1
        let expect = if w + d as i64 >= 0 { binom(1, d) } else { 0 };
        assert_eq!(c["dim"].as_u64().unwrap() as usize, expect, "({d},{w})");
        assert_eq!(c["certification"]["kind"], "exact");
    }
}

#[test]
fn duality_of_the_line_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "a.txt", &["sym", "--dim", "1", "--max-weight", "4"]);
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "1"]);
    let o = kmd(dir.path(), &["duality", "c.txt", "a.txt", "--window", "0..1,-1..4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["verdict"], "CONSISTENT");
    assert_eq!(v["conventions"], koszul_core::CONVENTIONS_VERSION);
}

#[test]
fn cache_hits_misses_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "a.txt", &["sym", "--dim", "1", "--max-weight", "4"]);
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "1"]);
    let cache = dir.path().join("cache");
    let run = |window: &str| {
        Command::new(env!("CARGO_BIN_EXE_kmd"))
            .current_dir(dir.path())
            .env("KMD_CACHE_DIR", &cache)
            .args(["duality", "c.txt", "a.txt", "--window", window, "--format", "json"])
            .output()
            .unwrap()
    };
    let entries = || std::fs::read_dir(&cache).map(|d| d.count()).unwrap_or(0);
    let first = run("0..1,-1..4");
    assert_eq!(entries(), 1);
    let second = run("0..1,-1..4");
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(entries(), 1);

    let other = run("0..1,-1..3");
    assert_ne!(first.stdout, other.stdout);
    assert_eq!(entries(), 2);

    for e in std::fs::read_dir(&cache).unwrap() {
        let p = e.unwrap().path();
        let mut bytes = std::fs::read(&p).unwrap();
        bytes.truncate(bytes.len() / 2);
        std::fs::write(&p, bytes).unwrap();
    }
    let third = run("0..1,-1..4");
    assert!(stderr(&third).contains("warning: discarding corrupt cache entry"));
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "2"]);
    let a = kmd(dir.path(), &["hh", "c.txt", "--window", "0..1,-1..1", "--products", "--format", "json"]);
    let b = kmd(dir.path(), &["hh", "c.txt", "--window", "0..1,-1..1", "--products", "--format", "json", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "field Q\nkind algebra\nelem 1 0 0\nunit 1\nmul 1 y 1 1\n").unwrap();
    let o = kmd(dir.path(), &["validate", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.txt:5:7: unknown basis element 'y'"), "{}", stderr(&o));

    let o = kmd(dir.path(), &["validate", "missing.txt"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kmd(dir.path(), &["hh", "bad.txt", "--window", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kmd(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn family_tags_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let path = builtin(dir.path(), "a.txt", &["sym", "--dim", "1", "--max-weight", "2"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let edited: String = text.lines().filter(|l| !l.starts_with("mul x1 x1 ")).map(|l| format!("{l}\n")).collect();
    assert_ne!(text, edited);
    std::fs::write(&path, edited).unwrap();
    let o = kmd(dir.path(), &["validate", "a.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does not match the family"), "{}", stderr(&o));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "u.txt", &["envelope", "--lie", "sl2", "--N", "2"]);
    builtin(dir.path(), "ce.txt", &["ce", "--lie", "sl2"]);
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "1"]);
    builtin(dir.path(), "a.txt", &["sym", "--dim", "1", "--max-weight", "3"]);

    // products outside the materialized filtration cannot be certified
    let o = kmd(dir.path(), &["hh", "u.txt", "--window", "0..0,0..2"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    // the zero cochain is twisting but not acyclic
    std::fs::write(dir.path().join("zero.txt"), "field Q\nkind tau\n").unwrap();
    let o = kmd(dir.path(), &["twist-check", "c.txt", "a.txt", "zero.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let o = kmd(dir.path(), &["acyclicity", "c.txt", "a.txt", "zero.txt", "--window", "0..1,0..2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = kmd(dir.path(), &["duality", "c.txt", "a.txt", "zero.txt", "--window", "0..1,0..2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("PRECONDITION FAILED"));

    // hh needs a weight range
    let o = kmd(dir.path(), &["hh", "c.txt"]);
    assert_eq!(o.status.code(), Some(2));

    // mismatched kinds are usage errors
    let o = kmd(dir.path(), &["duality", "a.txt", "c.txt", "--window", "0..1,0..2"]);
    assert_eq!(o.status.code(), Some(2));

    // characteristic p is refused for the Chevalley–Eilenberg builder
    let o = kmd(dir.path(), &["builtin", "ce", "--lie", "sl2", "--field", "101"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn acyclicity_and_bar_cobar() {
    let dir = tempfile::tempdir().unwrap();
    builtin(dir.path(), "c.txt", &["ext-coalgebra", "--dim", "2"]);
    builtin(dir.path(), "a.txt", &["sym", "--dim", "2", "--max-weight", "3"]);
    let o = kmd(dir.path(), &["acyclicity", "c.txt", "a.txt", "--window", "-2..0,0..3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["verdict"], "ACYCLIC");

    let o = kmd(dir.path(), &["cobar", "c.txt", "--word-bound", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let cells = json(&o)["report"]["cohomology"]["cells"].clone();
    // the cobar of ΛV is quasi-isomorphic to SV: H⁰ of weight w has dim w+1
    for c in cells.as_array().unwrap() {
        assert_eq!(c["bidegree"]["degree"], 0);
        let w = c["bidegree"]["weight"].as_u64().unwrap();
        assert_eq!(c["dim"].as_u64().unwrap(), w + 1);
    }

    let emitted = dir.path().join("bar.txt");
    let o = kmd(dir.path(), &["bar", "a.txt", "--word-bound", "2", "--emit", emitted.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = kmd(dir.path(), &["validate", "bar.txt"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
