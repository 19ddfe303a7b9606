use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TREE_PD6: &str = "v v1\nv v2\nv v3\nv3 w1\nw1 a\nw1 b\nw1 c\n";
const TREE_PD5: &str = "v v1\nv v2\nv2 w1\nv2 w2\nw1 a\na b\na c\nc d\n";
const T33: &str = "a b\na x1\na x2\na x3\nb y1\nb y2\nb y3\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_forest-ara"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), v)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn pd_of_the_sample_trees() {
    let dir = TempDir::new().unwrap();
    for (text, want) in [(TREE_PD6, 6), (TREE_PD5, 5), ("x y\n", 1)] {
        let p = write(&dir, "t.txt", text);
        let (code, v) = json(&["pd", "--input", s(&p)]);
        assert_eq!(code, 0);
        assert_eq!(v["results"]["value"], want);
        assert_eq!(v["format_version"], 1);
        assert_eq!(v["command"], "pd");
        assert!(v["timings"].is_null());
    }
}

#[test]
fn text_output_carries_the_format_version() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.txt", TREE_PD6);
    let out = run(&["pd", "--input", s(&p)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# forest-ara pd, format-version 1\n"));
    assert!(text.contains("pd = 6\n"));
}

#[test]
fn ara_pipeline_with_both_verifications() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.txt", TREE_PD5);
    let tls = dir.path().join("tls.json");
    let (code, v) = json(&["ara", "--input", s(&p), "--verify", "sv,oracle", "--tls-out", s(&tls)]);
    assert_eq!(code, 0, "{v}");
    let r = &v["results"];
    assert_eq!(r["length"], 5);
    assert_eq!(r["verification"]["sv"]["ok"], true);
    let oracle = r["verification"]["oracle"].as_array().unwrap();
    assert_eq!(oracle.len(), 2);
    assert!(oracle.iter().all(|o| o["equal"] == true));
    assert_eq!(r["strict_chains"], serde_json::json!([3, 2]));

    // The report and the bare system both feed the checking commands.
    let report = write(&dir, "report.json", &v.to_string());
    for input in [&report, &tls] {
        let (code, o) = json(&["oracle", "--input", s(input), "--fields", "2"]);
        assert_eq!(code, 0);
        assert_eq!(o["results"]["equal"], true);
        let (code, t) = json(&["tls", "verify", "--input", s(input)]);
        assert_eq!(code, 0);
        assert_eq!(t["results"]["valid"], true);
        let (code, c) = json(&["sv", "check", "--input", s(input)]);
        assert_eq!(code, 0);
        assert_eq!(c["results"]["ok"], true);
    }
    let (code, t) = json(&["tls", "verify", "--input", s(&report), "--forest", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(t["results"]["support_matches_forest"], true);
}

#[test]
fn dropping_an_element_fails_the_checks() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.txt", TREE_PD5);
    let tls = dir.path().join("tls.json");
    assert!(run(&["ara", "--input", s(&p), "--tls-out", s(&tls)]).status.success());
    let mut sys: Value = serde_json::from_str(&fs::read_to_string(&tls).unwrap()).unwrap();
    sys["elements"].as_array_mut().unwrap().remove(0);
    let bad = write(&dir, "bad.json", &sys.to_string());
    let (code, c) = json(&["sv", "check", "--input", s(&bad)]);
    assert_eq!(code, 1, "{c}");
    assert_eq!(c["results"]["ok"], false);
    let (code, t) = json(&["tls", "verify", "--input", s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(t["results"]["valid"], false);
}

#[test]
fn wrong_support_is_a_verification_failure() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.txt", TREE_PD5);
    let report = dir.path().join("r.json");
    let out = run(&["--json", "ara", "--input", s(&p)]);
    fs::write(&report, &out.stdout).unwrap();
    let other = write(&dir, "o.txt", TREE_PD6);
    let (code, t) = json(&["tls", "verify", "--input", s(&report), "--forest", s(&other)]);
    assert_eq!(code, 1);
    assert_eq!(t["results"]["support_matches_forest"], false);
}

#[test]
fn double_star_needs_the_family_flag() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t33.txt", T33);
    let (code, v) = json(&["ara", "--input", s(&p)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "NotStretched");
    assert!(v["error"]["message"].as_str().unwrap().contains("--family double-star 3 3"));

    let (code, v) = json(&["ara", "--family", "double-star", "2", "3", "--verify", "sv,oracle"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["length"], 4);
    let (code, v) = json(&["ara", "--family", "line", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["length"], 4);
}

#[test]
fn resolution_betti_numbers() {
    let (code, v) = json(&["resolution", "--family", "double-star", "2", "3", "--matrices"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["betti"], serde_json::json!([6, 9, 5, 1]));
    assert_eq!(r["minimal"], true);
    assert_eq!(r["linear"], true);
    assert_eq!(r["matrices"][3]["dense"], serde_json::json!([["0", "-y3", "y2", "-y1", "a"]]));

    let (_, v) = json(&["resolution", "--family", "double-star", "4", "2"]);
    assert_eq!(v["results"]["betti"][0], 7);
    assert_eq!(v["results"]["betti"][1], 13);

    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", "x^2*y\n");
    let (code, v) = json(&["resolution", "--gens", s(&g)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["betti"], serde_json::json!([1]));
}

#[test]
fn resolution_order_flag() {
    let dir = TempDir::new().unwrap();
    // Path x1 - x2 - x3 - x4: minimal only when the middle edge comes first.
    let g = write(&dir, "g.txt", "x3*x4 x1*x2 x2*x3\n");
    let (_, given) = json(&["resolution", "--gens", s(&g)]);
    assert_eq!(given["results"]["minimal"], false);
    assert!(given["results"]["betti"].is_null());
    let (_, lex) = json(&["resolution", "--gens", s(&g), "--order", "lex"]);
    assert_eq!(lex["results"]["generators"], serde_json::json!(["x1*x2", "x2*x3", "x3*x4"]));
    let m = write(&dir, "m.txt", "x2*x3 x1*x2 x3*x4\n");
    let (_, mid) = json(&["resolution", "--gens", s(&m)]);
    assert_eq!(mid["results"]["betti"], serde_json::json!([3, 2]));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "a b\nb c\nc a\n");
    let (code, v) = json(&["pd", "--input", s(&tri)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "CycleDetected");
    let bad = write(&dir, "bad.txt", "a b\nlonely\n");
    let (code, v) = json(&["pd", "--input", s(&bad)]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Parse");
    let (code, v) = json(&["pd", "--input", s(&dir.path().join("missing.txt"))]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Io");
    let (code, _) = json(&["family", "cycle", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_cap_is_enforced() {
    let (_, v) = json(&["ara", "--family", "line", "20"]);
    let dir = TempDir::new().unwrap();
    let report = write(&dir, "r.json", &v.to_string());
    let (code, v) = json(&["oracle", "--input", s(&report), "--fields", "3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "CapExceeded");
    let (code, v) = json(&["ara", "--family", "line", "20", "--verify", "oracle", "--fields", "2,3"]);
    assert_eq!(code, 0, "{v}");
    let reports = v["results"]["verification"]["oracle"].as_array().unwrap();
    assert!(reports.iter().all(|r| r.get("skipped").is_some()));
}

#[test]
fn reports_are_deterministic_and_digest_the_input() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "t.txt", TREE_PD6);
    let a = run(&["--json", "ara", "--input", s(&p), "--verify", "sv,oracle"]).stdout;
    let b = run(&["--json", "ara", "--input", s(&p), "--verify", "sv,oracle"]).stdout;
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    use sha2::{Digest, Sha256};
    assert_eq!(v["input_digest"], hex::encode(Sha256::digest(TREE_PD6.as_bytes())));
    let (_, t) = json(&["--timings", "pd", "--input", s(&p)]);
    assert!(t["timings"]["total_ms"].as_f64().is_some());
}

#[test]
fn family_output_round_trips() {
    let out = run(&["family", "double-star", "2", "3"]);
    assert!(out.status.success());
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "f.txt", &String::from_utf8(out.stdout).unwrap());
    let (code, v) = json(&["pd", "--input", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], 4);
    let (_, f) = json(&["family", "line", "6"]);
    assert_eq!(f["results"]["bound_is_sharp"], true);
    let (_, f) = json(&["family", "line", "7"]);
    assert_eq!(f["results"]["bound_is_sharp"], false);
}
