use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rainbow-hcd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const EXAMPLE: &str = "3\n0 1\n1 2\n3 4\n";

#[test]
fn solve_example_and_verify() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "h.txt", EXAMPLE);
    let cert = dir.path().join("c.json");
    let o = run(&["solve", s(&inst), "--out", s(&cert)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["order"], 7);
    assert_eq!(doc["classes"].as_array().unwrap().len(), 3);
    let v = run(&["verify", s(&cert), s(&inst)]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).contains("certificate valid"));
}

#[test]
fn solve_to_stdout_with_trace() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "h.txt", "4\n10 20\n20 30\n30 10\n40 50\n");
    let o = run(&["solve", s(&inst), "--trace", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["seed"], 7);
    assert!(String::from_utf8_lossy(&o.stderr).contains("route:"));
}

#[test]
fn parse_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [("mismatch", "3\n0 1\n1 2\n"), ("zero", "0\n"), ("loop", "1\n2 2\n"), ("junk", "two\n")] {
        let inst = write(&dir, name, text);
        let o = run(&["solve", s(&inst)]);
        assert_eq!(code(&o), 1, "{name}");
    }
    let o = run(&["solve", s(&dir.path().join("missing"))]);
    assert_eq!(code(&o), 1);
}

fn solved(dir: &TempDir, text: &str) -> (PathBuf, PathBuf, Value) {
    let inst = write(dir, "inst.txt", text);
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&run(&["solve", s(&inst), "--out", s(&cert)])), 0);
    let doc = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    (inst, cert, doc)
}

#[test]
fn rainbow_violation_exit_5() {
    let dir = TempDir::new().unwrap();
    let (inst, cert, mut doc) = solved(&dir, EXAMPLE);
    let a0 = doc["assignment"][0].clone();
    doc["assignment"][1] = a0;
    fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = run(&["verify", s(&cert), s(&inst)]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("rainbow violation"), "{}", stdout(&o));
}

#[test]
fn broken_cycle_exit_5() {
    let dir = TempDir::new().unwrap();
    let (inst, cert, mut doc) = solved(&dir, EXAMPLE);
    let mut c0 = doc["classes"][0].as_array().unwrap().clone();
    let mut c1 = doc["classes"][1].as_array().unwrap().clone();
    let moved = c0.pop().unwrap();
    c1.push(moved);
    doc["classes"][0] = Value::Array(c0);
    doc["classes"][1] = Value::Array(c1);
    fs::write(&cert, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", s(&cert), s(&inst)])), 5);
}

#[test]
fn certificate_for_other_instance_exit_5() {
    let dir = TempDir::new().unwrap();
    let (_, cert, _) = solved(&dir, EXAMPLE);
    let other = write(&dir, "other.txt", "3\n0 1\n1 2\n2 3\n");
    assert_eq!(code(&run(&["verify", s(&cert), s(&other)])), 5);
}

#[test]
fn truncated_certificate_exit_1() {
    let dir = TempDir::new().unwrap();
    let (inst, cert, _) = solved(&dir, EXAMPLE);
    let text = fs::read_to_string(&cert).unwrap();
    fs::write(&cert, &text[..text.len() / 2]).unwrap();
    assert_eq!(code(&run(&["verify", s(&cert), s(&inst)])), 1);
}

#[test]
fn oracle_finds_and_refutes() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "h.txt", EXAMPLE);
    let cert = dir.path().join("o.json");
    let o = run(&["oracle", s(&inst), "--out", s(&cert)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("found"));
    assert_eq!(code(&run(&["verify", s(&cert), s(&inst)])), 0);

    // P3 in one class and a disjoint edge in the other cannot extend in K_5
    let o = run(&["oracle", s(&inst), "--n", "2", "--precolor", "0,0,1"]);
    assert_eq!(code(&o), 2, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("proved none"));
}

#[test]
fn oracle_budget_exit_4() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "h.txt", "5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    assert_eq!(code(&run(&["oracle", s(&inst), "--budget", "3"])), 4);
}

#[test]
fn walecki_outputs() {
    let o = run(&["walecki", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(&["walecki", "4", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["order"], 9);
    assert_eq!(doc["cycles"].as_array().unwrap().len(), 4);
    assert_eq!(code(&run(&["walecki", "0"])), 1);
}

fn checksums(out: &str) -> Vec<String> {
    out.lines()
        .filter(|l| l.starts_with('n'))
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            format!("{} {}", f[0], f[f.len() - 1])
        })
        .collect()
}

#[test]
fn bench_checksums_are_stable() {
    let args = ["bench", "--n-range", "2..6", "--samples", "4", "--seed", "11"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let (ca, cb) = (checksums(&stdout(&a)), checksums(&stdout(&b)));
    assert_eq!(ca.len(), 20);
    assert_eq!(ca, cb);
    assert!(stdout(&a).contains("20 instances, 0 failed"));
}

#[test]
fn bench_exhaustive() {
    let o = run(&["bench", "--n-range", "1..4", "--exhaustive"]);
    assert_eq!(code(&o), 0);
    // 1 + 2 + 5 + 11 isomorphism classes
    assert!(stdout(&o).contains("19 instances, 0 failed"));
    assert_eq!(code(&run(&["bench", "--n-range", "5..2"])), 1);
}
