use std::path::Path;

use assert_cmd::Command;
use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

fn kaprekar() -> Command {
    Command::cargo_bin("kaprekar").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = kaprekar().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    kaprekar().args(args).output().unwrap().status.code().unwrap()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn schema(name: &str) -> JSONSchema {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(name);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    JSONSchema::options()
        .with_draft(Draft::Draft202012)
        .compile(&v)
        .unwrap()
}

fn assert_valid(s: &JSONSchema, doc: &str) {
    let v: Value = serde_json::from_str(doc).unwrap();
    if let Err(errs) = s.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {}", msgs.join("; "));
    };
}

#[test]
fn step_counts() {
    assert_eq!(
        stdout(&["step", "83246529", "--count", "2"]),
        "83246529 7631\n76308633 8433\n84326652 6431\n"
    );
    assert_eq!(
        stdout(&["step", "3524", "-w", "4", "--count", "3"]),
        "3524 31\n3087 84\n8352 62\n6174 62\n"
    );
}

#[test]
fn step_until_repeat() {
    let s = stdout(&["step", "3524", "-w", "4"]);
    assert!(s.ends_with("6174 62\n6174 62\nfixed point\n"), "{s}");
    let s = stdout(&["step", "12", "-w", "5"]);
    assert!(s.starts_with("00012 21\n"), "{s}");
    assert!(s.contains("cycle of length"), "{s}");
}

#[test]
fn step_json() {
    let v: Value = serde_json::from_str(&stdout(&["step", "3524", "--count", "1", "--format", "json"])).unwrap();
    assert_eq!(v["steps"][0]["number"], "3087");
    assert_eq!(v["width"], 4);
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(exit_code(&["step", "1111"]), 2);
    assert_eq!(exit_code(&["step", "12a4"]), 2);
    assert_eq!(exit_code(&["step", "123", "-w", "1"]), 2);
    assert_eq!(exit_code(&["step", "12345", "-w", "4"]), 2);
    assert_eq!(exit_code(&["group", "IV"]), 2);
    assert_eq!(exit_code(&["group", "II", "-w", "8"]), 2);
    assert_eq!(exit_code(&["derive", "-w", "17"]), 2);
    assert_eq!(exit_code(&["cycles", "-w", "5", "--format", "dot"]), 2);
    assert_eq!(exit_code(&["partition", "-w", "5", "-r", "0"]), 2);
    assert_eq!(exit_code(&["equiv", "6174"]), 2);
    assert_eq!(exit_code(&["equiv", "6174", "495"]), 2);
    assert_eq!(exit_code(&["frobnicate"]), 2);
}

#[test]
fn derive_summaries() {
    assert!(stdout(&["derive", "-w", "3"]).starts_with("width 3: 2 functions\n"));
    assert!(stdout(&["derive", "-w", "2"]).starts_with("width 2: 2 functions\n"));
    assert_eq!(stdout(&["constants", "-w", "2"]), "no fixed points\n");
    let s = stdout(&["derive", "-w", "6"]);
    assert!(s.contains("(k=1): 9 classes, 2 orderings, 2 functions"), "{s}");
    assert!(s.contains("(k=2): 45 classes, 11 orderings, 11 functions"), "{s}");
    let csv = stdout(&["derive", "-w", "4", "--format", "csv"]);
    assert!(csv.starts_with("id,aliases,family,permutation,output,domain,points\n"));
}

#[test]
fn cycles_and_constants() {
    assert_eq!(stdout(&["cycles", "-w", "6"]), golden("cycles_w6.txt"));
    assert_eq!(stdout(&["cycles", "-w", "5"]), golden("cycles_w5.txt"));
    assert_eq!(stdout(&["constants", "-w", "4"]), "6174 62 F1-even:3142\n");
    let s = stdout(&["constants", "-w", "6", "--format", "csv"]);
    assert!(s.contains("632,631764,") && s.contains("550,549945,"), "{s}");
}

#[test]
fn partitions_and_groups() {
    assert!(stdout(&["partition", "-w", "6", "-r", "2"]).starts_with("width 6, order 2: 82 blocks\n"));
    assert!(stdout(&["partition", "-w", "6", "-r", "2"]).contains("643 <- 863 833 762 732 332\n"));
    assert_eq!(
        stdout(&["group", "II", "-w", "6", "--format", "csv"]),
        golden("group_ii_w6.csv")
    );
    assert!(stdout(&["group", "II", "-w", "6"]).ends_with("group: Klein\n"));
    assert!(stdout(&["group", "3", "-w", "7"]).ends_with("group: Z2\n"));
    assert!(stdout(&["group", "I", "-w", "6"]).ends_with("closed: false\nabelian: true\ngroup: none\n"));
    let s = stdout(&["stabilize", "-w", "6"]);
    assert!(
        s.contains("tree A: 201 classes, stable from order 13 with 7 blocks"),
        "{s}"
    );
    assert!(
        s.contains("tree B: 17 classes, stable from order 4 with 1 blocks"),
        "{s}"
    );
    assert!(
        s.contains("tree C: 1 classes, stable from order 1 with 1 blocks"),
        "{s}"
    );
}

#[test]
fn equivalences() {
    let s = stdout(&["equiv", "5068069", "3071934", "-r", "4"]);
    assert!(s.ends_with("equivalent at order 4: true\n"), "{s}");
    let s = stdout(&["equiv", "5068069", "3071934", "-r", "3"]);
    assert!(s.ends_with("equivalent at order 3: false\n"), "{s}");
    let s = stdout(&["equiv", "--catalog", "-w", "6"]);
    assert!(s.contains("sound: true, blocks: 82, split blocks: 0"), "{s}");
}

#[test]
fn json_outputs_match_schemas() {
    let catalog = schema("catalog.schema.json");
    let graph = schema("graph.schema.json");
    let part = schema("partition.schema.json");
    for w in ["2", "5", "6", "7"] {
        assert_valid(&catalog, &stdout(&["derive", "-w", w, "--format", "json"]));
        assert_valid(&graph, &stdout(&["graph", "-w", w, "--format", "json"]));
        assert_valid(&part, &stdout(&["partition", "-w", w, "-r", "3", "--format", "json"]));
    }
}

#[test]
fn graph_dot() {
    assert_eq!(stdout(&["graph", "-w", "3", "--format", "dot"]), golden("graph_w3.dot"));
}

#[test]
fn byte_identical_reruns() {
    for args in [
        &["derive", "-w", "7", "--format", "json"][..],
        &["graph", "-w", "7", "--format", "json"],
        &["partition", "-w", "7", "-r", "2", "--format", "csv"],
        &["stabilize", "-w", "6", "--format", "json"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("kaprekar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("cycles.txt");
    kaprekar()
        .args(["cycles", "-w", "6", "--out", p.to_str().unwrap()])
        .assert()
        .success()
        .stdout("");
    assert_eq!(std::fs::read_to_string(&p).unwrap(), golden("cycles_w6.txt"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_paper_reports_every_check() {
    let out = kaprekar().arg("verify-paper").output().unwrap();
    let s = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines.len(), 12, "{s}");
    assert!(
        lines.iter().all(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")),
        "{s}"
    );
    let failed = lines.iter().any(|l| l.starts_with("FAIL "));
    assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }));
}
