use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_torus-ledger"));
    cmd.env_remove("TORUS_LEDGER_MAX_SEARCH");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn manifest(dir: &Path, name: &str, period: &str) -> String {
    let body = format!(
        r#"{{"name": "{name}", "sequence": {{"prefix": [], "period": {period}}}, "options": {{"depth": 5, "horizon": 3}}}}"#
    );
    write(dir, &format!("{name}.json"), &body)
        .to_string_lossy()
        .into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interlace_points_file() {
    let dir = TempDir::new().unwrap();
    let alt = write(
        dir.path(),
        "alt.json",
        r#"{"a": ["1/8", "5/8"], "b": ["3/8", "7/8"]}"#,
    );
    let out = run(&["interlace", "points", s(&alt), "--brute-force"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("interlacing: 2\n"));
    assert!(stdout(&out).contains("brute force: 2 (agrees)"));

    let a_only = write(dir.path(), "a.json", r#"{"A": ["1/8"]}"#);
    let out = run(&["interlace", "points", s(&a_only)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "interlacing: 0");

    let decimal = write(dir.path(), "dec.json", r#"{"a": ["0.1"], "b": ["1/2"]}"#);
    let out = run(&["interlace", "points", s(&decimal)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.1"));

    let shared = write(dir.path(), "shared.json", r#"{"a": ["1/2"], "b": ["5/2"]}"#);
    assert_eq!(code(&run(&["interlace", "points", s(&shared)])), 2);
}

#[test]
fn interlace_intervals_file() {
    let dir = TempDir::new().unwrap();
    let body = r#"{
        "a": [{"lo": "0/1", "hi": "1/3", "lo_closed": true, "hi_closed": true}],
        "b": [{"lo": "2/3", "hi": "1/1", "lo_closed": true, "hi_closed": true}]
    }"#;
    let f = write(dir.path(), "c.json", body);
    let out = run(&["--json", "interlace", "intervals", s(&f), "--brute-force"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["interlacing"]["value"], "1");
    assert_eq!(doc["interlacing"]["kind"], "EXACT");
    assert_eq!(doc["agrees"], true);

    let overlap = r#"{
        "a": [{"lo": "0/1", "hi": "1/2", "lo_closed": true, "hi_closed": true}],
        "b": [{"lo": "1/3", "hi": "1/1", "lo_closed": true, "hi_closed": true}]
    }"#;
    let f = write(dir.path(), "o.json", overlap);
    let out = run(&["interlace", "intervals", s(&f)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn cover_lift_file() {
    let dir = TempDir::new().unwrap();
    let body = r#"{
        "a": [{"lo": "0/1", "hi": "1/3", "lo_closed": true, "hi_closed": true}],
        "b": [{"lo": "2/3", "hi": "1/1", "lo_closed": true, "hi_closed": true}]
    }"#;
    let f = write(dir.path(), "c.json", body);
    let out = run(&["cover-lift", s(&f), "--fold", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("lifted to 2-fold cover: 2"));
    assert_eq!(code(&run(&["cover-lift", s(&f), "--fold", "0"])), 2);
}

#[test]
fn tubes_command() {
    let out = run(&["tubes", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "m=3 k=2, 12 tubes (8×1/81, 4×1/27)");

    let out = run(&["--json", "tubes", "1", "--verify"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["report"]["pass"], true);
    assert_eq!(doc["provenance"]["source"], "as_given");
    assert_eq!(doc["tubes"].as_array().unwrap().len(), 4);

    assert_eq!(code(&run(&["tubes", "0"])), 2);
}

#[test]
fn search_budget_variable_is_validated() {
    let out = bin()
        .args(["tubes", "2", "--verify"])
        .env("TORUS_LEDGER_MAX_SEARCH", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let out = bin()
        .args(["tubes", "2", "--verify"])
        .env("TORUS_LEDGER_MAX_SEARCH", "0")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "the default assignment needs no search");
}

#[test]
fn classify_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let gabai = manifest(dir.path(), "gabai", r#"[{"type": "gabai", "order": 2}]"#);
    let out = run(&["classify", &gabai]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("verdict: DOUBLE3SPACE_YES"));

    let mcm = manifest(dir.path(), "mcm", r#"[{"type": "mcmillan", "order": 2}]"#);
    let out = run(&["--json", "classify", &mcm]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["verdict"], "DOUBLE3SPACE_NO");
    let values: Vec<&str> = doc["evidence"]["divergence"]["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["bound"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["1", "3", "11", "43"]);

    let mixed = manifest(
        dir.path(),
        "mixed",
        r#"[{"type": "gabai", "order": 2}, {"type": "mcmillan", "order": 2}]"#,
    );
    let out = run(&["classify", &mixed]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("UNKNOWN"));
}

#[test]
fn manifest_validation() {
    let dir = TempDir::new().unwrap();
    let shallow = write(
        dir.path(),
        "shallow.json",
        r#"{"name": "x", "sequence": {"period": [{"type": "gabai", "order": 2}]}, "options": {"depth": 3, "horizon": 2}}"#,
    );
    assert_eq!(code(&run(&["classify", s(&shallow)])), 2);
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"name": "x", "sequence": {"period": [{"type": "gabai", "order": 0}]}}"#,
    );
    assert_eq!(code(&run(&["classify", s(&zero)])), 2);
    let empty = write(
        dir.path(),
        "empty.json",
        r#"{"name": "x", "sequence": {"period": []}}"#,
    );
    assert_eq!(code(&run(&["classify", s(&empty)])), 2);
    let g = manifest(dir.path(), "g", r#"[{"type": "gabai", "order": 2}]"#);
    assert_eq!(code(&run(&["--horizon", "0", "classify", &g])), 2);
    assert_eq!(code(&run(&["classify", "/nonexistent/manifest.json"])), 2);
}

#[test]
fn distinguish_index_and_trace() {
    let dir = TempDir::new().unwrap();
    let g2 = manifest(dir.path(), "g2", r#"[{"type": "gabai", "order": 2}]"#);
    let g3 = manifest(dir.path(), "g3", r#"[{"type": "gabai", "order": 3}]"#);
    let out = run(&["--json", "distinguish", &g2, &g3, "--prime", "3"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["verdict"], "DISTINCT");
    assert_eq!(doc["evidence"]["prime"]["witness"]["link"]["type"], "gabai");
    assert_eq!(code(&run(&["distinguish", &g2, &g2, "--prime", "3"])), 3);
    assert_eq!(code(&run(&["distinguish", &g2, &g3, "--prime", "9"])), 2);

    let both = manifest(
        dir.path(),
        "both",
        r#"[{"type": "gabai", "order": 2}, {"type": "gabai", "order": 3}]"#,
    );
    let out = run(&["index", &both, "0", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "N(T0, T2) = 4·6 = 24");
    assert_eq!(code(&run(&["index", &both, "2", "2"])), 2);

    let mcm = manifest(
        dir.path(),
        "m",
        r#"[{"type": "mcmillan", "order": 3}, {"type": "mcmillan", "order": 2}]"#,
    );
    let out = run(&["--json", "trace", &mcm]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    let values: Vec<&str> = doc["trace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["bound"]["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["5", "19", "113"]);
    let wh = manifest(dir.path(), "wh", r#"[{"type": "whitehead"}]"#);
    assert_eq!(code(&run(&["trace", &wh])), 2);
}

#[test]
fn emitted_certificates_replay() {
    let dir = TempDir::new().unwrap();
    let g = manifest(
        dir.path(),
        "g",
        r#"[{"type": "gabai", "order": 1}, {"type": "gabai", "order": 2}]"#,
    );
    let out = run(&["--json", "classify", &g]);
    assert_eq!(code(&out), 0);
    let cert = write(dir.path(), "cert.json", &stdout(&out));
    let out = run(&["replay", s(&cert)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("replays identically"));

    // a certificate whose evidence was edited no longer replays
    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["evidence"]["exhaustion"]["nestings"][0]["v0_components"] = Value::from(99);
    let tampered = write(
        dir.path(),
        "tampered.json",
        &serde_json::to_string_pretty(&doc).unwrap(),
    );
    assert_eq!(code(&run(&["replay", s(&tampered)])), 1);

    let garbage = write(dir.path(), "garbage.json", "{}");
    assert_eq!(code(&run(&["replay", s(&garbage)])), 2);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["interlace", "triangles", "x.json"])), 2);
    assert_eq!(code(&run(&["--version"])), 0);
}
