use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rbsuper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbsuper")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = rbsuper(&all);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&o.stdout)));
    (code(&o), v)
}

fn has_schema(v: &Value) {
    for key in ["command", "status", "witnesses", "timing"] {
        assert!(v.get(key).is_some(), "missing `{}` in {}", key, v);
    }
    assert!(v["witnesses"].is_array());
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const B21: &str = "\
[algebra]
name = B_2_1
kind = pre-lie
basis = e1:even, e2:odd
[products]
e2 * e2 = 1/2 e1
";

const R2: &str = "\
[operator]
id = R2
R(e1) = a1 e1
R(e2) = 2 a1 e2
";

#[test]
fn b_tables_verify() {
    let (c, v) = json(&["catalog", "verify", "--filter", "B_*"]);
    assert_eq!(c, 0);
    has_schema(&v);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["summary"]["algebras"], 10);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["summary"]["checked"], 11);
}

#[test]
fn empty_filter_gives_zeros() {
    let (c, v) = json(&["catalog", "verify", "--filter", "nothing*"]);
    assert_eq!(c, 0);
    assert_eq!(v["summary"]["checked"], 0);
}

#[test]
fn errata_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("errata.jsonl");
    let o = rbsuper(&["catalog", "verify", "--filter", "osp12", "--errata", path.to_str().unwrap()]);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let summary = &lines.last().unwrap()["summary"];
    assert_eq!(summary["checked"], 31);
    let failed = summary["failed"].as_u64().unwrap() as usize;
    assert_eq!(lines.len() - 1, failed);
    assert_eq!(code(&o), if failed == 0 { 0 } else { 1 });
    for rec in &lines[..failed] {
        assert_eq!(rec["witness"].as_array().unwrap().len(), 2);
        assert!(!rec["residual"].as_str().unwrap().is_empty());
    }
}

#[test]
fn odd_square_landing_in_odd_part_is_a_grading_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.salg", "[algebra]\nname = bad\nkind = associative\nbasis = e1:even, e2:odd\n[products]\ne2 * e2 = e2\n");
    let (c, v) = json(&["check", &f]);
    assert_eq!(c, 1);
    has_schema(&v);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["witnesses"][0]["identity"], "grading");
    assert_eq!(v["witnesses"][0]["indices"], serde_json::json!([2, 2, 2]));
}

#[test]
fn check_passes_on_catalog_text() {
    let dir = tempfile::tempdir().unwrap();
    let shown = rbsuper(&["catalog", "show", "C_3_1"]);
    assert_eq!(code(&shown), 0);
    let f = write(dir.path(), "c31.salg", &String::from_utf8(shown.stdout).unwrap());
    assert_eq!(code(&rbsuper(&["check", &f])), 0);
    assert_eq!(code(&rbsuper(&["check", "catalog:osp12"])), 0);
}

#[test]
fn derived_product_from_r2() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "b21.salg", B21);
    let op = write(dir.path(), "r2.op", R2);
    let out = dir.path().join("out.salg");
    let (c, v) = json(&["derive", "prelie_rb_to_prelie", &alg, "--rb", &op, "-o", out.to_str().unwrap()]);
    assert_eq!(c, 0, "{}", v);
    has_schema(&v);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("e2 * e2 = 2*a1 e1"), "{}", text);
    assert!(!text.contains("e1 * "), "{}", text);
    // the output is a valid input again
    assert_eq!(code(&rbsuper(&["check", out.to_str().unwrap()])), 0);
}

#[test]
fn derive_without_output_prints_the_algebra() {
    let (c, v) = json(&["derive", "rb_to_ldend", "catalog:B_2_1", "--family", "R2"]);
    assert_eq!(c, 0);
    let text = v["output"].as_str().unwrap();
    assert!(text.contains("kind = l-dendriform"));
    assert!(text.contains("[products.left]"));
}

#[test]
fn derive_needs_an_operator_that_holds() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "b21.salg", B21);
    let op = write(dir.path(), "bad.op", "[operator]\nid = X\nR(e1) = e1\nR(e2) = e2\n");
    assert_eq!(code(&rbsuper(&["derive", "prelie_rb_to_prelie", &alg, "--rb", &op])), 2);
    assert_eq!(code(&rbsuper(&["derive", "no_such_construction", &alg])), 2);
    assert_eq!(code(&rbsuper(&["derive", "prelie_rb_to_prelie", &alg])), 2);
}

#[test]
fn verify_rb_by_role() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "b21.salg", B21);
    let good = write(dir.path(), "r2.op", R2);
    let bad = write(dir.path(), "bad.op", "[operator]\nid = X\nR(e1) = e1\nR(e2) = e2\n");
    let (c, v) = json(&["verify-rb", &alg, &good]);
    assert_eq!(c, 0);
    assert_eq!(v["families"][0]["role"], "rota-baxter");
    let (c, v) = json(&["verify-rb", &alg, &bad]);
    assert_eq!(c, 1);
    assert_eq!(v["witnesses"][0]["family"], "X");
    assert!(v["witnesses"][0]["identity"].as_str().unwrap().starts_with("rb"));
}

#[test]
fn solve_b21() {
    let (c, v) = json(&["solve-rb", "catalog:B_2_1", "--restarts", "40"]);
    assert_eq!(c, 0, "{}", v);
    has_schema(&v);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["exact"]["dimension"], 1);
    assert_eq!(v["exact"]["components"].as_array().unwrap().len(), 2);
    for m in v["matches"].as_array().unwrap() {
        assert!(!m.as_array().unwrap().is_empty());
    }
}

#[test]
fn solve_is_seeded() {
    let run = |seed: &str| json(&["--seed", seed, "solve-rb", "catalog:B_2_1", "--method", "numeric", "--restarts", "10"]).1["numeric"].clone();
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn structure_parameters_must_be_pinned() {
    let (c, v) = json(&["solve-rb", "catalog:A_hat_1_2", "--method", "groebner"]);
    assert_eq!(c, 2);
    assert_eq!(v["status"], "error");
    let (c, v) = json(&["solve-rb", "catalog:A_hat_1_2", "--method", "groebner", "--pin", "k=2"]);
    assert_eq!(c, 0, "{}", v);
    assert_eq!(v["exact"]["description"], "points");
}

#[test]
fn oracle_agrees_and_records_seed() {
    let (c, v) = json(&["--seed", "9", "oracle-check", "catalog:B_2_1"]);
    assert_eq!(c, 0);
    has_schema(&v);
    assert_eq!(v["seed"], 9);
    for f in v["families"].as_array().unwrap() {
        assert_eq!(f["point_max"].as_array().unwrap().len(), 5);
        assert_eq!(f["agree"], true);
    }
}

#[test]
fn input_errors_exit_2() {
    let (c, v) = json(&["check", "/nonexistent/file.salg"]);
    assert_eq!(c, 2);
    has_schema(&v);
    assert_eq!(code(&rbsuper(&["catalog", "show", "nope"])), 2);
    assert_eq!(code(&rbsuper(&["frobnicate"])), 2);
    assert_eq!(code(&rbsuper(&["check"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "broken.salg", "[algebra]\nname = x\nkind = pre-lie\nbasis = e1:even\n[products]\ne1 * e1 = e7\n");
    assert_eq!(code(&rbsuper(&["check", &f])), 2);
}

#[test]
fn list_covers_every_entry() {
    let (c, v) = json(&["catalog", "list"]);
    assert_eq!(c, 0);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 117);
    assert_eq!(entries.iter().map(|e| e["families"].as_u64().unwrap()).sum::<u64>(), 273);
    assert!(entries.iter().any(|e| e["id"] == "osp12" && e["families"] == 31));
}
