use std::path::PathBuf;
use std::process::{Command, Output};

fn finseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finseq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file")
}

fn poset_file(name: &str, json: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("finseq-{}-{name}.json", std::process::id()));
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn embeds_verdicts_set_the_exit_code() {
    let yes = finseq(&["word", "embeds", "(a b)^w", "(b a)^w"]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes).trim(), "true");

    let no = finseq(&["word", "embeds", "(a)^w b", "(a)^w"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(stdout(&no).trim(), "false");
}

#[test]
fn embeds_uses_the_poset_file() {
    let p = poset_file("chain", r#"{"elements": ["a", "b"], "le": [["a", "b"]]}"#);
    let p = p.to_str().unwrap();
    assert_eq!(finseq(&["word", "embeds", "a a", "(b)^w", "--poset", p]).status.code(), Some(0));
    assert_eq!(finseq(&["word", "embeds", "b", "(a)^w", "--poset", p]).status.code(), Some(1));
    assert_eq!(finseq(&["word", "embeds", "c", "a", "--poset", p]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_two() {
    let o = finseq(&["word", "embeds", "a ()^w", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at"));
    assert_eq!(finseq(&["ord", "canon", "w^"]).status.code(), Some(2));
}

#[test]
fn unsupported_levels_exit_with_three() {
    assert_eq!(finseq(&["word", "decompose", "a", "--k", "3"]).status.code(), Some(3));
    assert_eq!(finseq(&["word", "embeds", "(((a)^w)^w)^w", "a"]).status.code(), Some(3));
}

#[test]
fn ordinal_expressions_are_canonicalized() {
    assert_eq!(stdout(&finseq(&["ord", "canon", "3 + w"])).trim(), "w");
    assert_eq!(stdout(&finseq(&["ord", "canon", "w^w*2 + 1"])).trim(), "w^w*2 + 1");
    assert_eq!(stdout(&finseq(&["ord", "nat-add", "w + 1", "w"])).trim(), "w*2 + 1");
    assert_eq!(stdout(&finseq(&["ord", "add", "1", "w"])).trim(), "w");
    assert_eq!(stdout(&finseq(&["ord", "two-pow", "w + 1"])).trim(), "w*2");
}

#[test]
fn report_json_matches_golden_files() {
    let o = finseq(&["bound", "report", "--alpha", "w+1", "--beta", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("report_w1_2.json"));

    let o = finseq(&["bound", "report", "--alpha", "w^2", "--beta", "w+1", "--json"]);
    assert_eq!(stdout(&o), golden("report_w2_w1.json"));
}

#[test]
fn report_json_parses() {
    let o = finseq(&["bound", "report", "--alpha", "w+1", "--beta", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["upper_finseq"], "w^w*4");
}

#[test]
fn higman_table_lists_cases_and_samples() {
    let out = stdout(&finseq(&["demo", "higman-table"]));
    assert!(out.contains("w^(w^(n-1))"));
    assert!(out.lines().any(|l| l.starts_with("7 ") && l.ends_with("w^(w^6)")));
    assert!(out.lines().any(|l| l.starts_with("w^w*2 + 1 ") && l.ends_with("w^(w^(w^w*2 + 1))")));
}

#[test]
fn schmidt_demo_orders_the_bounds() {
    let o = finseq(&["demo", "schmidt"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w^w*4 >= w^w*3 + 1 >= w^w*2 + 1"));
}

#[test]
fn word_canon_and_decompose() {
    let out = stdout(&finseq(&["word", "canon", "a b (b a c)^w"]));
    assert!(out.contains("canonical     a b (a b c)^w"), "{out}");
    let out = stdout(&finseq(&["word", "decompose", "a (b)^w c", "--k", "2"]));
    assert!(out.contains("list  [a, {b}, c]"), "{out}");
}

#[test]
fn wqo_commands() {
    let out = stdout(&finseq(&["wqo", "oeval", "Pfin(H(w^w))"]));
    assert_eq!(out.trim(), "w^(w^w)  (exact)");
    let o = finseq(&["wqo", "hembed", "w+1", "w^2", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 mismatches"));
}

#[test]
fn lower_psi_prints_the_image() {
    let p = poset_file("psi", r#"{"elements": ["a", "b", "v"], "le": [["a", "v"]]}"#);
    let o = finseq(&["lower", "psi", "--k", "1", "--poset", p.to_str().unwrap(), "--input", "{a} {a,b}", "--star"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("image v (a)^w v (a b)^w"), "{out}");
}

#[test]
fn selftest_passes() {
    let o = finseq(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 6);
}
