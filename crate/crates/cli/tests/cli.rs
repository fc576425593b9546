use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wdp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdp"))
        .args(args)
        .env_remove("WDP_THREADS")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn enumerate_json_has_twelve_records() {
    let o = wdp(&["enumerate", "--max-blowups", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 12);
    for r in records {
        assert_eq!(r["slope"]["n_inv"], 0);
        assert_eq!(r["slope"]["destabilizes"], true);
        assert!(r["name"].is_string());
    }
}

#[test]
fn enumerate_smaller_bounds_match_the_golden_prefix() {
    for (m, count) in [(0, 3), (1, 3), (2, 6), (5, 9), (6, 12)] {
        let o = wdp(&["enumerate", "--max-blowups", &m.to_string()]);
        assert_eq!(o.status.code(), Some(0), "m = {m}: {}", stderr(&o));
        assert!(stdout(&o).contains(&format!(
            "{count} classes with at most {m} blowups; golden list: match"
        )));
    }
}

#[test]
fn enumerate_dot_emits_undirected_graphs() {
    let o = wdp(&["enumerate", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("graph ").count(), 12);
    assert!(!out.contains("digraph") && !out.contains("->"));
}

#[test]
fn enumerate_beyond_bound_is_usage_error() {
    let o = wdp(&["enumerate", "--max-blowups", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = wdp(&["enumerate", "--json"]);
    let b = Command::new(env!("CARGO_BIN_EXE_wdp"))
        .args(["enumerate", "--json"])
        .env("WDP_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(wdp(&["enumerate", "--json"]).stdout, a.stdout);
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_wdp"))
        .args(["examples"])
        .env("WDP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("WDP_THREADS"));
}

#[test]
fn examples_verify() {
    let o = wdp(&["examples", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        assert_eq!(r["verified"], true);
        assert_eq!(r["slope"]["mu_f"], r["slope"]["mu_t"]);
    }
    let x12 = rows.iter().find(|r| r["surface"] == "X_{1,2}").unwrap();
    assert_eq!(
        x12["slope"]["mu_f"],
        serde_json::json!({"num": 2, "den": 1})
    );
}

#[test]
fn eliminate_reports() {
    let o = wdp(&["toric", "eliminate", "--case", "6d"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: infeasible"));

    let o = wdp(&["toric", "eliminate", "--case", "8c", "--json", "--trace"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "infeasible");
    assert_eq!(v["n0"], -4);
    let max = v["branches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["max_ell"].as_u64().unwrap())
        .max();
    assert_eq!(max, Some(4));
    assert!(v["trace"].as_array().unwrap().len() > 1);

    let plain = wdp(&["toric", "eliminate", "--case", "9"]);
    let traced = wdp(&["toric", "eliminate", "--case", "9", "--trace"]);
    assert!(stdout(&traced).lines().count() > stdout(&plain).lines().count());
}

#[test]
fn unknown_case_is_usage_error() {
    let o = wdp(&["toric", "eliminate", "--case", "7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wdp(&["toric", "foliation", "--case", "9", "--ray", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gorenstein_list() {
    let o = wdp(&["toric", "list-gorenstein", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 16);
    let mut cases: Vec<&str> = list.iter().filter_map(|g| g["case"].as_str()).collect();
    cases.sort();
    assert_eq!(cases, ["6d", "8c", "9"]);
}

#[test]
fn toric_foliation() {
    let o = wdp(&["toric", "foliation", "--case", "9", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["n0"], -3);
    assert_eq!(v["dicritical_cones"].as_array().unwrap().len(), 1);
}

#[test]
fn check_reports_a_known_class() {
    let o = wdp(&["check", &fixture("x_2_3.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["name"], "X_{2,3}");
    assert_eq!(v["singularities"], "3A1+D4");
    assert_eq!(v["k_squared"], 2);
    assert_eq!(v["n_sequence"], serde_json::json!([0, -1, 0, -1, 0, -1, 0]));
}

#[test]
fn check_flags_a_blowup_on_a_minus_two_curve() {
    let f = temp_file(r#"{"base": "F2", "steps": [{"kind": "on_section"}]}"#);
    let o = wdp(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("weak del Pezzo  no"));
}

#[test]
fn malformed_config_reports_position() {
    let f = temp_file("{\"base\": \"F0\",\n \"stepz\": []}");
    let o = wdp(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2") && err.contains("stepz"), "{err}");

    let missing = wdp(&["check", "/nonexistent/config.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn singularities_of_fixture() {
    let o = wdp(&["singularities", &fixture("x_2_3.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["label"], "3A1+D4");
    assert_eq!(v["minus_two_curves"].as_array().unwrap().len(), 7);
    let dot = wdp(&["singularities", &fixture("x_2_3.json"), "--dot"]);
    assert!(stdout(&dot).starts_with("graph minus_two {"));
}

#[test]
fn fsing_discrepancies() {
    let o = wdp(&["fsing", &fixture("f_chain.dot"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let d: Vec<(i64, i64)> = v["discrepancies"]
        .as_array()
        .unwrap()
        .iter()
        .map(|q| (q["num"].as_i64().unwrap(), q["den"].as_i64().unwrap()))
        .collect();
    // det of [[-3,1,0],[1,-2,1],[0,1,-2]] is -7
    assert_eq!(d, [(3, 7), (2, 7), (1, 7)]);
    assert_eq!(v["summary"], "canonical (type 1)");
}

#[test]
fn fsing_rejects_bad_dot() {
    let f = temp_file("graph g {\n  a [label=\"-2,1,1\"];\n  a -> b;\n}\n");
    let o = wdp(&["fsing", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wdp(&[]).status.code(), Some(2));
    assert_eq!(wdp(&["enumerate", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        wdp(&["enumerate", "--json", "--dot"]).status.code(),
        Some(2)
    );
}

#[test]
fn verbose_reports_timing_on_stderr() {
    let o = wdp(&["--verbose", "examples"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("elapsed"));
    assert_eq!(o.stdout, wdp(&["examples"]).stdout);
}
