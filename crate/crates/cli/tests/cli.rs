//! End-to-end runs of the `verdier` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn verdier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verdier")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &TempDir, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(file);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = verdier(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_nonregular_example_fails_with_witness() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "ex.json", &["example-nonregular"]);
    let o = verdier(&["check", s(&p), "--property", "both", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"], false);
    let pair = report["witnesses"].as_array().unwrap().iter().find(|w| w["kind"] == "pair").unwrap();
    assert_eq!((pair["p"].as_str(), pair["q"].as_str()), (Some("0"), Some("1")));
}

#[test]
fn check_boundary_simplex_passes() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "b2.json", &["boundary-simplex", "2"]);
    for property in ["verdier", "gorenstein", "both"] {
        assert_eq!(code(&verdier(&["check", s(&p), "--property", property])), 0, "{property}");
    }
}

#[test]
fn malformed_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let cyc = dir.path().join("cycle.json");
    std::fs::write(&cyc, r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#).unwrap();
    assert_eq!(code(&verdier(&["check", s(&cyc)])), 2);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "not json").unwrap();
    assert_eq!(code(&verdier(&["check", s(&junk)])), 2);
    assert_eq!(code(&verdier(&["check", "/nonexistent/poset.json"])), 2);
    assert_eq!(code(&verdier(&["generate", "no-such-kind"])), 2);
    assert_eq!(code(&verdier(&["generate", "polygon", "2"])), 2);
    assert_eq!(code(&verdier(&["--ring", "F4", "corpus-verify"])), 2);
}

#[test]
fn gamma_of_intervals_and_constants() {
    let dir = TempDir::new().unwrap();
    let ex = generate(&dir, "ex.json", &["example-nonregular"]);
    let o = verdier(&["gamma", s(&ex), "--interval", "0", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("H^0 = Z"), "{}", stdout(&o));
    assert_eq!(code(&verdier(&["gamma", s(&ex), "--interval", "1", "1'"])), 2);
    assert_eq!(code(&verdier(&["gamma", s(&ex), "--interval", "0", "9"])), 2);

    let single = generate(&dir, "one.json", &["chain", "1"]);
    let o = verdier(&["gamma", s(&single), "--interval", "0", "0", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["display"], "H^0 = Z");

    // constant Z on the boundary of the triangle: the cohomology of a circle
    let tri = generate(&dir, "tri.json", &["boundary-simplex", "2"]);
    let poset: Value = serde_json::from_str(&std::fs::read_to_string(&tri).unwrap()).unwrap();
    let mut at = serde_json::Map::new();
    for e in poset["elements"].as_array().unwrap() {
        at.insert(e.as_str().unwrap().into(), serde_json::json!({"ranks": {"0": 1}}));
    }
    let mut edges = serde_json::Map::new();
    for c in poset["covers"].as_array().unwrap() {
        edges.insert(format!("{}→{}", c[0].as_str().unwrap(), c[1].as_str().unwrap()), serde_json::json!({"0": [[1]]}));
    }
    let diagram = serde_json::json!({"poset": poset, "ring": "Z", "at": at, "edges": edges});
    let dpath = dir.path().join("const.json");
    std::fs::write(&dpath, diagram.to_string()).unwrap();
    let o = verdier(&["gamma", s(&tri), s(&dpath)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("H^0 = Z, H^1 = Z"), "{}", stdout(&o));
}

#[test]
fn dualize_writes_dual_and_table() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "p.json", &["polygon", "4"]);
    let d = dir.path().join("d.json");
    let o = verdier(&["generate", "random-interval-diagram", "5", s(&p), "--out", s(&d)]);
    assert_eq!(code(&o), 0);
    let out = dir.path().join("dual.json");
    let o = verdier(&["dualize", s(&p), s(&d), "--out", s(&out), "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(table["table"].as_object().unwrap().len(), 8);
    let dual: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(dual["variance"], "contravariant");
}

#[test]
fn generate_is_deterministic_and_sized() {
    let dir = TempDir::new().unwrap();
    let a = generate(&dir, "a.json", &["random-graded-poset", "0", "6"]);
    let b = generate(&dir, "b.json", &["random-graded-poset", "0", "6"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let count = |p: &Path| -> usize {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
        v["elements"].as_array().unwrap().len()
    };
    assert_eq!(count(&generate(&dir, "b3.json", &["boundary-simplex", "3"])), 14);
    assert_eq!(count(&generate(&dir, "ex.json", &["example-nonregular"])), 4);
    assert_eq!(count(&generate(&dir, "ps.json", &["poincare-face-poset"])), 392);
}

#[test]
fn reports_round_trip_and_formats_agree() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "fan.json", &["fan", "3"]);
    let json = stdout(&verdier(&["check", s(&p), "--format", "json"]));
    let value: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap(), json.trim_end());
    let text = stdout(&verdier(&["check", s(&p), "--format", "text"]));
    assert!(text.contains("verdict: fails"));
    assert_eq!(value["verdict"], false);
    for w in value["witnesses"].as_array().unwrap() {
        if w["kind"] == "element" {
            assert!(text.contains(w["p"].as_str().unwrap()));
        }
    }
}

#[test]
fn exit_codes_ignore_parallelism() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "ex.json", &["example-nonregular"]);
    let q = generate(&dir, "poly.json", &["polygon", "5"]);
    for jobs in ["1", "3"] {
        assert_eq!(code(&verdier(&["--jobs", jobs, "check", s(&p)])), 1);
        assert_eq!(code(&verdier(&["--jobs", jobs, "check", s(&q)])), 0);
    }
}

#[test]
fn oversized_posets_skip_or_sample() {
    let dir = TempDir::new().unwrap();
    let p = generate(&dir, "b4.json", &["boundary-simplex", "4"]);
    let o = verdier(&["check", s(&p), "--property", "verdier", "--full-check-bound", "10", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["witnesses"].as_array().unwrap().iter().any(|w| w["kind"] == "skipped"));
    let o = verdier(&["check", s(&p), "--property", "verdier", "--full-check-bound", "10", "--sample-pairs", "20", "--seed", "4", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 4);
    assert!(v["witnesses"].as_array().unwrap().iter().any(|w| w["kind"] == "sampled" && w["cases"] == 20));
}

#[test]
fn corpus_verify_passes() {
    let o = verdier(&["corpus-verify", "--sample-pairs", "50"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("entries match"));
}
