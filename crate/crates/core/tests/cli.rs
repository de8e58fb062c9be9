use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadforge"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPREADFORGE_CHECKPOINT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_json(o: &Output) -> Value {
    // successful commands print one pretty document, failures a one-line witness
    let s = stdout(o);
    serde_json::from_str(&s).unwrap_or_else(|_| serde_json::from_str(s.lines().last().unwrap()).unwrap())
}

#[test]
fn usage_errors_exit_2() {
    let d = TempDir::new().unwrap();
    for args in [
        &["graph", "--bogus"][..],
        &["graph"],
        &["field-check", "--q", "6"],
        &["ddg", "--family", "5", "--q", "3"],
        &["enumerate", "--q", "3", "--checkpoint-every", "0"],
    ] {
        assert_eq!(run_in(d.path(), args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run_in(d.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn construct_verify_and_reject_a_corrupted_spread() {
    let d = TempDir::new().unwrap();
    let o = run_in(d.path(), &["spread", "construct", "--q", "3", "--verify", "--emit", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_in(d.path(), &["spread", "verify", "--input", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_json(&o)["status"], "pass");

    let mut v: Value = serde_json::from_slice(&std::fs::read(d.path().join("s.json")).unwrap()).unwrap();
    let lines = v["spread"]["lines"].as_array_mut().unwrap();
    let a = lines[0][0].clone();
    let b = lines[1][0].clone();
    lines[0][0] = b;
    lines[1][0] = a;
    std::fs::write(d.path().join("bad.json"), v.to_string()).unwrap();
    let o = run_in(d.path(), &["spread", "verify", "--input", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
    let w = last_json(&o);
    assert_eq!(w["status"], "fail");
    assert!(w["witness"].is_string());
}

#[test]
fn symplectic_spread_round_trip() {
    let d = TempDir::new().unwrap();
    let o = run_in(d.path(), &["spread", "construct", "--q", "3", "--kind", "symplectic", "--e", "3", "--emit", "s.json"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run_in(d.path(), &["spread", "verify", "--input", "s.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn ddg_emits_graph6() {
    let d = TempDir::new().unwrap();
    let o = run_in(d.path(), &["ddg", "--family", "1", "--q", "3", "--emit", "g.g6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_json(&o)["tuple"], "(40,31,22,24,10,4)");
    let text = std::fs::read_to_string(d.path().join("g.g6")).unwrap();
    let g = spreadforge::spgraph::graph6::decode(text.trim()).unwrap();
    assert_eq!(g.n(), 40);
    assert!((0..40).all(|v| g.degree(v) == 31));
}

#[test]
fn non_ddg_route_fails_certification() {
    let d = TempDir::new().unwrap();
    let o = run_in(d.path(), &["ddg", "--family", "2", "--q", "3", "--route", "partial-complement-of-sp"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(last_json(&o)["status"], "fail");
}

#[test]
fn manifests_are_reproducible() {
    let d = TempDir::new().unwrap();
    let args = |m: &'static str| vec!["--manifest", m, "ddg", "--family", "3", "--q", "3", "--emit", "g.g6"];
    assert_eq!(run_in(d.path(), &args("m1.json")).status.code(), Some(0));
    assert_eq!(run_in(d.path(), &args("m2.json")).status.code(), Some(0));
    let load = |m: &str| -> Value { serde_json::from_slice(&std::fs::read(d.path().join(m)).unwrap()).unwrap() };
    let (m1, m2) = (load("m1.json"), load("m2.json"));
    assert_eq!(m1["outputs"], m2["outputs"]);
    assert!(m1["outputs"]["g.g6"].is_string());
    assert_eq!(m1["field"]["p"], 3);

    let o = run_in(d.path(), &["replay", "m1.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_json(&o)["reproduced"], true);

    // a tampered digest is reported
    let mut bad = m1.clone();
    bad["outputs"]["g.g6"] = Value::from("00");
    std::fs::write(d.path().join("bad.json"), bad.to_string()).unwrap();
    let o = run_in(d.path(), &["replay", "bad.json"]);
    assert_eq!(o.status.code(), Some(1));
}

fn enumerate(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["enumerate", "--q", "3", "--emit", "out.jsonl", "--checkpoint-every", "4"];
    args.extend_from_slice(extra);
    run_in(dir, &args)
}

#[test]
fn interrupted_enumeration_resumes_byte_identically() {
    let full = TempDir::new().unwrap();
    let o = enumerate(full.path(), &["--checkpoint", "c.ckpt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_json(&o)["enumerated"], 27);
    let want = std::fs::read(full.path().join("out.jsonl")).unwrap();

    let part = TempDir::new().unwrap();
    let o = enumerate(part.path(), &["--checkpoint", "c.ckpt", "--stop-after", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(last_json(&o)["finished"], false);
    let o = enumerate(part.path(), &["--checkpoint", "c.ckpt", "--stop-after", "7"]);
    assert_eq!(last_json(&o)["enumerated"], 17);
    let o = enumerate(part.path(), &["--checkpoint", "c.ckpt"]);
    assert_eq!(last_json(&o)["finished"], true);
    assert_eq!(std::fs::read(part.path().join("out.jsonl")).unwrap(), want);
}

#[test]
fn checkpoint_directory_from_environment() {
    let d = TempDir::new().unwrap();
    let ck = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_spreadforge"))
        .args(["enumerate", "--q", "3", "--stop-after", "5"])
        .current_dir(d.path())
        .env("SPREADFORGE_CHECKPOINT_DIR", ck.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(ck.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(files.len(), 1, "{files:?}");
    let o = Command::new(env!("CARGO_BIN_EXE_spreadforge"))
        .args(["enumerate", "--q", "3"])
        .current_dir(d.path())
        .env("SPREADFORGE_CHECKPOINT_DIR", ck.path())
        .output()
        .unwrap();
    let v = last_json(&o);
    assert_eq!(v["enumerated"], 27);
    assert_eq!(v["per_forced"][0], 27);
}

#[test]
fn tables_for_q5() {
    let d = TempDir::new().unwrap();
    let o = run_in(d.path(), &["tables", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("2 classes, 14625 spreads"), "{s}");
    assert!(s.contains("1152  [0, 30, 48]"), "{s}");
    assert!(s.contains("1440  [0, 45, 33]"), "{s}");
}
