use std::process::{Command, Output};

use serde_json::Value;

fn wavesym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavesym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = wavesym(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

fn element<'a>(doc: &'a Value, label: &str) -> &'a Value {
    doc["elements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["label"] == label)
        .unwrap_or_else(|| panic!("no element {label}"))
}

#[test]
fn report_schema_and_agreement() {
    let (code, doc) = json(&["report", "--equation", "chi_plus"]);
    assert_eq!(code, 0);
    assert_eq!(doc["equation"], "chi_plus");
    assert_eq!(doc["agreement"], true);
    let c = element(&doc, "C");
    assert_eq!(c["invariant"], true);
    assert_eq!(c["matrix"].as_array().unwrap().len(), 4);
    let p1 = element(&doc, "P1");
    assert_eq!(p1["invariant"], false);
    assert!(p1["matrix"].is_null());
    assert_eq!(doc["elements"].as_array().unwrap().len(), 32);
}

#[test]
fn weyl_rows() {
    let (code, doc) = json(&["report", "--equation", "weyl_plus"]);
    assert_eq!(code, 0);
    assert_eq!(element(&doc, "P1*P2*P3*C")["invariant"], true);
    assert_eq!(element(&doc, "P1*P2*P3")["invariant"], false);
}

#[test]
fn desitter_with_kappa() {
    let (code, doc) = json(&["report", "--equation", "desitter", "--kappa", "1.5"]);
    assert_eq!(code, 0);
    assert_eq!(element(&doc, "T1")["invariant"], true);
    assert_eq!(element(&doc, "C")["invariant"], false);
}

#[test]
fn json_output_is_byte_identical() {
    let a = wavesym(&["report", "--equation", "flat_plus", "--format", "json"]);
    let b = wavesym(&["report", "--equation", "flat_plus", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn floats_written_with_seventeen_digits() {
    let out = wavesym(&["transform", "--name", "V1", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"residual\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.replace('.', "").len(), 17, "{number}");
}

#[test]
fn verify_all_passes_and_lists_checks() {
    let (code, doc) = json(&["verify-all"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["pass"], true);
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for needle in ["clifford.rep26", "transform.V1", "algebra.phi_pos", "position.XW", "content.dirac_massless"] {
        assert!(names.contains(&needle), "missing {needle}");
    }
}

#[test]
fn corrupted_catalog_fails_v1() {
    let (code, doc) = json(&["verify-all", "--corrupt-chi"]);
    assert_eq!(code, 1);
    let failing: Vec<&str> = doc["failing"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failing.contains(&"transform.V1"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wavesym(&["report", "--equation", "bogus"]).status.code(), Some(2));
    assert_eq!(wavesym(&["transform", "--name", "U1", "--tol", "1e-3"]).status.code(), Some(2));
    assert_eq!(wavesym(&["report", "--equation", "weyl_plus", "--samples", "4"]).status.code(), Some(2));
    assert_eq!(wavesym(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn algebra_and_position_commands() {
    let (code, doc) = json(&["algebra", "--generators", "phi"]);
    assert_eq!(code, 0);
    assert!(doc["relations"].as_array().unwrap().iter().any(|r| r == "[J12, J23] = -i J13"));
    let (code, _) = json(&["algebra", "--generators", "chi2_printed"]);
    assert_eq!(code, 1);
    let (code, doc) = json(&["position", "--name", "Xpsi"]);
    assert_eq!(code, 0);
    assert_eq!(doc["unitary"], "U21");
}

#[test]
fn content_command() {
    let (code, doc) = json(&["content", "--equation", "weyl_plus"]);
    assert_eq!(code, 0);
    assert_eq!(doc["content"].as_array().unwrap().len(), 2);
    let (code, doc) = json(&["content", "--equation", "chi_plus"]);
    assert_eq!(code, 1);
    assert!(doc["content"].is_null());
    assert_eq!(doc["by_sample"].as_array().unwrap().len(), 12);
}

#[test]
fn markdown_mirrors_report() {
    let out = wavesym(&["report", "--equation", "weyl_plus"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| T1 | invariant |"));
    assert!(text.contains("agreement: true"));
}
