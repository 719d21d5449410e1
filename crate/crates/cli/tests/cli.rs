use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn hodge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = hodge(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, code)
}

#[test]
fn k5_edge_spectrum_groups() {
    let out = hodge(&["spectra", &fixture("k5.json"), "--form", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("0 ×6, 5 ×4"));
}

#[test]
fn c4_vertex_and_edge_tables_agree() {
    let (v, code) = json(&["spectra", &fixture("c4.json"), "--form", "both"]);
    assert_eq!(code, 0);
    assert_eq!(v["delta0"]["groups"], v["delta1"]["groups"]);
    assert_eq!(v["tolerance"], 1e-8);
}

#[test]
fn self_loop_is_an_input_error_naming_the_edge() {
    let out = hodge(&["spectra", &fixture("self_loop.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("edge #1") && err.contains("self-loop"), "{err}");
}

#[test]
fn verify_reports() {
    let (k5, code) = json(&["verify", &fixture("k5.json")]);
    assert_eq!(code, 0);
    assert_eq!(k5["verdict"], true);
    assert_eq!(k5["circuit_rank"], 6);

    let (tree, _) = json(&["verify", &fixture("tree.json")]);
    assert_eq!(tree["verdict"], true);
    assert_eq!(tree["zero_mult1"], 0);

    let (two, _) = json(&["verify", &fixture("two_triangles.json")]);
    assert_eq!(two["zero_mult0"], 2);
    assert_eq!(two["kernel_matches_circuit_rank"], Value::Null);
    let table = hodge(&["verify", &fixture("two_triangles.json")]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("not asserted"));
}

#[test]
fn rank_and_harmonic_on_k5() {
    let (r, _) = json(&["rank", &fixture("k5.json")]);
    assert_eq!(r["circuit_rank"], 6);
    assert_eq!(r["cycles"].as_array().unwrap().len(), 6);
    let (h, _) = json(&["harmonic", &fixture("k5.json")]);
    for form in h["forms"].as_array().unwrap() {
        assert!(form["residual"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn family_headline_numbers() {
    let (gap, code) = json(&["family", "G1", "--cmd", "gap", "-N", "50"]);
    assert_eq!(code, 0);
    assert!(gap["gap"].as_f64().unwrap() >= 0.25);

    let (chi, _) = json(&["family", "G1", "--cmd", "chi", "-N", "30"]);
    assert!(chi["constant"].as_f64().unwrap() <= 40.0);

    let (kd, code) = json(&["family", "exponential", "--alpha", "2", "--cmd", "kerdelta", "-N", "1000"]);
    assert_eq!(code, 0);
    assert_eq!(kd["verdict"], "convergent");
    assert_eq!(kd["statement"], "0 is an eigenvalue of Δ₁");
}

#[test]
fn exit_codes() {
    assert_eq!(hodge(&["family", "G2", "--cmd", "kerdelta", "-N", "100"]).status.code(), Some(4));
    assert_eq!(hodge(&["family", "G7", "--cmd", "gap"]).status.code(), Some(2));
    assert_eq!(
        hodge(&["family", "exponential", "--alpha", "0.5", "--cmd", "gap"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hodge(&["family", "simple-Z", "--cmd", "cert", "--witness", "sign(n+0.5)"]).status.code(),
        Some(1)
    );
    assert_eq!(hodge(&["verify", &fixture("k5.json"), "--format", "csv"]).status.code(), Some(2));
    assert_eq!(hodge(&["spectra", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    for args in [
        vec!["verify", "K5"],
        vec!["family", "G2", "--cmd", "g2basis", "-N", "6"],
        vec!["family", "G1", "--cmd", "harmonic", "-N", "40"],
    ] {
        let args: Vec<String> = args
            .iter()
            .map(|a| if *a == "K5" { fixture("k5.json") } else { a.to_string() })
            .chain(["--format".into(), "json".into()])
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(hodge(&refs).stdout, hodge(&refs).stdout);
    }
}

#[test]
fn custom_family_file_and_out_flag() {
    let dir = std::env::temp_dir().join(format!("hodge-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fam = dir.join("quad.json");
    std::fs::write(&fam, r#"{"c": "(n+1)^2 + 1", "m": "1"}"#).unwrap();
    let out = dir.join("gap.json");
    let status = hodge(&[
        "family",
        fam.to_str().unwrap(),
        "--cmd",
        "gap",
        "-N",
        "20",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let custom: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let (builtin, _) = json(&["family", "G1", "--cmd", "gap", "-N", "20"]);
    assert_eq!(custom["gap"], builtin["gap"]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn truncation_exports_a_graph_file() {
    let out = hodge(&["family", "G2", "--cmd", "truncate", "-N", "2", "--format", "json"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let g = graph_hodge::WeightedGraph::from_json(&text).unwrap();
    assert_eq!((g.num_vertices(), g.num_edges()), (5, 6));
}
