mod common;

use std::process::{Command, Output};

use common::{conjecture_path, rules_path, SUITES};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_retainrw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn shipped_rule_files_check_strictly() {
    for s in SUITES {
        let o = cli(&["check-rules", "--strict", "--samples", "300", &rules_path(s)]);
        assert_eq!(o.status.code(), Some(0), "{s}: {}", stdout(&o));
        assert!(stdout(&o).ends_with("ok\n"));
    }
}

#[test]
fn demo_summary_line() {
    let o = cli(&["check-rules", &rules_path("demo")]);
    assert!(stdout(&o).contains("7 rules, 2 side-condition attachments"), "{}", stdout(&o));
}

#[test]
fn if_in_lhs_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.lsp");
    std::fs::write(&path, "(def-rp-rule bad (equal (f (if a b c)) (g a)))").unwrap();
    let o = cli(&["check-rules", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("bad"));
}

#[test]
fn unreadable_inputs_are_usage_errors() {
    assert_eq!(cli(&["check-rules", "/nonexistent/rules.lsp"]).status.code(), Some(2));
    assert_eq!(cli(&["bench-tree", "--depths", "1"]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.lsp");
    std::fs::write(&path, "(def-rp-rule x (equal (f a) a)").unwrap();
    assert_eq!(cli(&["check-rules", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn prove_succeeds_and_fails() {
    let rules = rules_path("demo");
    let conj = conjecture_path("three-round-to-evens");
    let o = cli(&["prove", "--rules", &rules, "--conjecture", &conj, "--verify", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("proved"));
    let o = cli(&["prove", "--rules", &rules, "--conjecture", &conj, "--no-side-conditions"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stats_are_json() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.json");
    let o = cli(&[
        "prove",
        "--rules",
        &rules_path("bitand"),
        "--conjecture",
        &conjecture_path("logand-integerp"),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert!(v["rule_applications"].as_u64().unwrap() > 0);
    assert_eq!(v["step_limit_hit"], serde_json::Value::Bool(false));
}

#[test]
fn rewrite_with_assumptions() {
    let o = cli(&[
        "rewrite",
        "--rules",
        &rules_path("bitand"),
        "--term",
        "(logand x y)",
        "--assume",
        "(integerp x)",
        "--assume",
        "(integerp y)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim_end().lines().last(), Some("(rp 'integerp (4vec-bitand x y))"));
}

#[test]
fn bench_csv() {
    let o = cli(&["bench-tree", "--depths", "3", "--reps", "1"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("param,mode,rewrite_calls,rule_attempts,rule_applications,nodes_created,wall_ms,node_visits,status")
    );
    assert_eq!(lines.count(), 2);
    let o = cli(&["bench-falist", "--sizes", "10", "--modes", "fast-alist", "--reps", "1"]);
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("10,fast-alist,") && rows[1].ends_with(",10,ok"), "{}", rows[1]);
}
