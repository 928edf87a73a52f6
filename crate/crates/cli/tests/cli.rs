use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_omnivocal")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn assert_contains(args: &[&str], needle: &str) {
    let text = stdout_of(args);
    assert!(text.contains(needle), "{args:?}: {needle:?} not in\n{text}");
}

fn assert_exit(args: &[&str], code: i32, needle: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(needle), "{args:?}: {needle:?} not in {stderr}");
}

#[test]
fn capacity_reports() {
    assert_contains(&["capacity", &data("xor.json")], "C = 0.500000 bits; argmin: 1|2|3");
    assert_contains(&["pin", &data("k3.json")], "C = 3/2");
    assert_contains(&["pin", "--complete", "5"], "C = 5/2");
    assert_exit(&["capacity", &data("bad_sum.json")], 2, "atoms sum to 0.900000");
    assert!(run(&["capacity", "--renormalize", &data("bad_sum.json")]).status.success());
}

#[test]
fn singleton_reports() {
    assert_contains(&["singleton", &data("xor.json"), "--method", "prop1"], "UniqueMinimizer (3 comparisons)");
    assert_contains(&["singleton", &data("identical_bits.json"), "--method", "brute"], "NonUniqueMinimizer; tie at 1,2|3");
    assert_contains(&["singleton", &data("random4.json"), "--method", "prop1"], "(10 comparisons)");
    assert_exit(&["singleton", &data("two_terminals.json")], 3, "m >= 3");
}

#[test]
fn silent_reports() {
    assert_contains(
        &["silent", &data("xor.json"), "--speakers", "1,2"],
        "C‖T = 0.000000; R_min = 2.000000; Lemma2 = 2.000000",
    );
    assert_contains(&["silent", &data("identical_bits.json"), "--speakers", "1"], "C‖T = 1.000000");
    assert_contains(&["silent", &data("xor.json"), "--speakers", "1,2,3"], "C‖T = 0.500000");
    assert_exit(&["silent", &data("xor.json"), "--speakers", "1,x"], 2, "--speakers");
    assert_exit(&["silent", &data("xor.json"), "--speakers", "4"], 2, "--speakers");
}

#[test]
fn omnivocality_reports() {
    assert_contains(&["omnivocality", &data("xor.json"), "--method", "all"], "Necessary (condition + lp agree)");
    assert_contains(&["omnivocality", &data("identical_bits.json"), "--method", "three"], "NotNecessary; Case I; silent {2,3}");
    assert_contains(&["omnivocality", &data("identical_bits.json"), "--method", "condition"], "Unknown");
    assert_contains(&["omnivocality", &data("random4.json"), "--method", "condition"], "Unknown");
    assert_contains(&["omnivocality", &data("identical_bits.json"), "--method", "lp"], "NotNecessary; LP equality");
    assert_exit(&["omnivocality", &data("two_terminals.json")], 3, "never necessary");
    assert_exit(&["omnivocality", &data("random4.json"), "--method", "three"], 3, "m = 3");
}

#[test]
fn isentropy_reports() {
    assert_contains(&["isentropy", &data("xor.json")], "isentropic: yes; g = [0, 1, 2]; g/k non-decreasing: yes");
    assert_contains(&["isentropy", &data("unequal_marginals.json")], "isentropic: no; witness");
    assert_contains(&["isentropy", &data("identical_bits.json")], "g = [0, 0, 1]");
    assert_exit(&["isentropy", "/nonexistent/source.json"], 2, "nonexistent");
}

#[test]
fn hunt_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let args = |out: &PathBuf, jobs: &'static str| {
        vec!["hunt".to_string(), "--m".into(), "4".into(), "--trials".into(), "10".into(), "--seed".into(), "1".into(),
             "--jobs".into(), jobs.into(), "--out".into(), out.display().to_string()]
    };
    let first = run(&args(&a, "1").iter().map(String::as_str).collect::<Vec<_>>());
    let second = run(&args(&b, "3").iter().map(String::as_str).collect::<Vec<_>>());
    assert!(first.status.success() && second.status.success());
    let log_a = std::fs::read(&a).unwrap();
    assert_eq!(log_a, std::fs::read(&b).unwrap());
    let lines: Vec<Value> = String::from_utf8(log_a).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 10);
    for (k, line) in lines.iter().enumerate() {
        assert_eq!(line["trial"], k);
        for field in ["seed", "m", "alphabet_sizes", "atoms_digest", "condition", "lp", "classification", "capacity", "gaps"] {
            assert!(!line[field].is_null(), "missing {field}");
        }
    }
    let summary = String::from_utf8(first.stdout).unwrap();
    let total: usize = summary
        .lines()
        .next()
        .unwrap()
        .split("; ")
        .skip(1)
        .map(|kv| kv.rsplit(": ").next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, 10);
    assert_exit(&["hunt", "--m", "3"], 3, "m = 3 is settled");
}

#[test]
fn json_numbers_round_trip() {
    let cases: Vec<Vec<String>> = vec![
        vec!["capacity".into(), data("random4.json")],
        vec!["singleton".into(), data("random4.json"), "--method".into(), "brute".into()],
        vec!["silent".into(), data("random4.json"), "--speakers".into(), "1,2,4".into()],
        vec!["omnivocality".into(), data("random4.json")],
        vec!["isentropy".into(), data("random4.json")],
        vec!["pin".into(), data("path3.json")],
    ];
    for case in cases {
        let mut args = vec!["--json"];
        args.extend(case.iter().map(String::as_str));
        let text = stdout_of(&args);
        assert_eq!(text.trim().lines().count(), 1, "{args:?} emitted more than one line");
        let value: Value = serde_json::from_str(&text).unwrap();
        let again: Value = serde_json::from_str(&value.to_string()).unwrap();
        assert_eq!(value, again, "{args:?}");
        assert_eq!(value.to_string(), text.trim());
    }
}

#[test]
fn outputs_are_deterministic() {
    for args in [vec!["omnivocality", "--json"], vec!["capacity", "--json"]] {
        let mut a = args.clone();
        let path = data("random4.json");
        a.push(&path);
        assert_eq!(stdout_of(&a), stdout_of(&a));
    }
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"m\": 2,\n  \"alphabet_sizes\": [2, 2],\n  \"atoms\": [{\"x\": [0], \"p\": 1}]\n}\n").unwrap();
    assert_exit(&["capacity", path.to_str().unwrap()], 2, "atoms[0].x");
    std::fs::write(&path, "{\n  \"m\": 2,\n  \"alphabet_sizes\": [2, \"two\"]\n}\n").unwrap();
    assert_exit(&["capacity", path.to_str().unwrap()], 2, "line 3");
}
