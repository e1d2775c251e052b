use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treealpha"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

const C6: &str = "p 6 6\ne 0 1\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 0\n";

fn write_pyramid(dir: &Path) {
    let spec = r#"{"family":"pyramid","lengths":[3,3,4],"pendants":0,"seed":5}"#;
    let o = run(&["--format", "text", "generate", spec, "--graph-only"], dir);
    assert_eq!(o.status.code(), Some(0));
    fs::write(dir.join("p.txt"), stdout(&o)).unwrap();
}

#[test]
fn generate_detect_and_separate_a_pyramid() {
    let dir = tempfile::tempdir().unwrap();
    write_pyramid(dir.path());
    let o = run(&["detect", "--pattern", "pyramid", "p.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"], "found");
    let o = run(&["detect", "--pattern", "theta", "p.txt"], dir.path());
    assert_eq!(json(&o)["result"], "absent");
    let o = run(&["separate", "--from", "pyramid", "p.txt"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert!(doc["violations"].as_array().unwrap().is_empty());
    assert!(doc["Z"].as_array().unwrap().len() <= 7);
}

#[test]
fn strip_round_trip_and_violation_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    write_pyramid(dir.path());
    let o = run(&["strip", "from-pyramid", "p.txt"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    fs::write(dir.path().join("s.json"), &o.stdout).unwrap();
    let o = run(&["strip", "validate", "s.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["valid"], true);
    assert_eq!(doc["flags"]["rich"], true);

    let mut s: Value =
        serde_json::from_slice(&fs::read(dir.path().join("s.json")).unwrap()).unwrap();
    s["eta_edge"][0].as_array_mut().unwrap().clear();
    fs::write(dir.path().join("bad.json"), s.to_string()).unwrap();
    let o = run(&["strip", "validate", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn decompose_then_mwis() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.txt"), C6).unwrap();
    let o = run(
        &[
            "decompose",
            "--s",
            "2",
            "--kmax",
            "2",
            "--out",
            "td.json",
            "c.txt",
        ],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(json(&o)["report"]["max_bag_alpha"].as_u64().unwrap() <= 10);
    fs::write(
        dir.path().join("w.json"),
        r#"["1", "2", "1", "2", "1", "5/2"]"#,
    )
    .unwrap();
    let o = run(
        &["mwis", "--td", "td.json", "--weights", "w.json", "c.txt"],
        dir.path(),
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    // Best stable set of the 6-cycle: {1, 3, 5} with weight 2 + 2 + 5/2.
    assert_eq!(json(&o)["value"], "13/2");
}

#[test]
fn campaigns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "campaign",
        "pyramid-sep",
        "--trials",
        "12",
        "--seed",
        "9",
        "--artifacts",
        "out",
    ];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["violated"], 0);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["detect", "--pattern", "theta", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    fs::write(dir.path().join("loop.txt"), "p 2 1\ne 1 1\n").unwrap();
    let o = run(&["detect", "--pattern", "theta", "loop.txt"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    write_pyramid(dir.path());
    let o = run(
        &["detect", "--pattern", "theta", "--cap", "5", "p.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    // Closed neighborhoods of single vertices cannot meet s = 1 on a 6-cycle.
    fs::write(dir.path().join("c.txt"), C6).unwrap();
    let o = run(
        &["decompose", "--s", "1", "--kmax", "2", "c.txt"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}
