use std::io::Write;

use toroidal_bosons::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn toroidal(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("toroidal").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(out: &str) -> serde_json::Value {
    serde_json::from_str(out).expect("valid JSON")
}

#[test]
fn level_prints_the_value_first() {
    let (code, out, _) = toroidal(&["level", "--algebra", "D", "--rank", "4", "--sector", "ns"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().next(), Some("-2"));
    let (_, out, _) = toroidal(&["level", "--algebra", "C", "--rank", "2"]);
    assert_eq!(out.lines().next(), Some("-1/2"));
}

#[test]
fn verify_c2_reports_half_level() {
    let (code, out, _) = toroidal(&[
        "verify",
        "--algebra",
        "C",
        "--rank",
        "2",
        "--sector",
        "ns",
        "--max-degree",
        "3/2",
        "--max-mode",
        "2",
        "--output",
        "json",
    ]);
    assert_eq!(code, EXIT_PASS);
    let doc = json(&out);
    let keys: Vec<&String> = doc.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["config", "instances", "summary", "version"]);
    assert_eq!(doc["config"]["max_degree"], "3/2");
    assert_eq!(doc["summary"]["variants"][0]["level"]["global"], "-1/2");
    assert_eq!(doc["summary"]["passed"], true);
}

#[test]
fn summary_counts_match_records() {
    let (_, out, _) = toroidal(&["verify", "--algebra", "A", "--rank", "3", "--max-mode", "1", "--output", "json"]);
    let doc = json(&out);
    let records = doc["instances"].as_array().unwrap();
    let totals = &doc["summary"]["variants"][0]["totals"];
    assert_eq!(totals["instances"].as_u64().unwrap() as usize, records.len());
    let passed = records.iter().filter(|r| r["status"] == "pass").count();
    assert_eq!(totals["passed"].as_u64().unwrap() as usize, passed);
    let checks: u64 = records.iter().map(|r| r["states_checked"].as_u64().unwrap()).sum();
    assert_eq!(totals["state_checks"].as_u64().unwrap(), checks);
}

#[test]
fn r_sector_carries_the_polarization_note() {
    let (code, out, _) =
        toroidal(&["verify", "--algebra", "A", "--rank", "2", "--sector", "r", "--zero-mode-cap", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("zero-mode polarization"));
}

#[test]
fn relation_failures_exit_one() {
    // The literal type C table solves a different level at node 0.
    let (code, out, _) = toroidal(&[
        "verify",
        "--algebra",
        "C",
        "--rank",
        "2",
        "--variant",
        "paper-literal",
        "--max-degree",
        "1",
        "--max-mode",
        "1",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("INCONSISTENT"));
    assert!(out.contains("result: FAIL"));
    // Unrealizable entries count against the run too.
    let (code, _, _) = toroidal(&[
        "verify",
        "--algebra",
        "B",
        "--rank",
        "3",
        "--variant",
        "paper-literal",
        "--max-degree",
        "1/2",
        "--max-mode",
        "0",
    ]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--algebra", "E", "--rank", "3"][..],
        &["verify", "--algebra", "A", "--rank", "3", "--max-degree", "1/3"],
        &["verify", "--algebra", "A", "--rank", "3", "--workers", "0"],
        &["verify", "--algebra", "A"],
        &["verify", "--algebra", "D", "--rank", "3"],
        &["verify", "--algebra", "A", "--rank", "3", "--bogus"],
        &["frobnicate"],
        &[],
        &["bracket", "--algebra", "A", "--rank", "3", "X(a9)", "a1"],
        &["bracket", "--algebra", "B", "--rank", "3", "--variant", "paper-literal", "a3", "a1"],
    ] {
        let (code, _, err) = toroidal(args);
        assert_eq!(code, EXIT_USAGE, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_is_not_an_error() {
    let (code, out, _) = toroidal(&["--help"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("adjudicate"));
}

#[test]
fn config_file_yields_to_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "algebra = \"A\"\nrank = 3\nmax_mode = 1\nmax_degree = \"1\"\noutput = \"json\"\nrelations = [\"R1\", \"R3\"]"
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    let (code, out, _) = toroidal(&["verify", "--config", path, "--rank", "2"]);
    assert_eq!(code, EXIT_PASS);
    let doc = json(&out);
    assert_eq!(doc["config"]["rank"], 2);
    assert_eq!(doc["config"]["relations"], serde_json::json!(["R1", "R3"]));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "algebra = \"A\"\nrnak = 3").unwrap();
    let (code, _, err) = toroidal(&["verify", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("rnak"));
    let (code, _, _) = toroidal(&["verify", "--config", "/nonexistent/x.toml"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn emitted_config_parses_back() {
    let (_, out, _) = toroidal(&[
        "verify",
        "--algebra",
        "A",
        "--rank",
        "3",
        "--max-degree",
        "1/2",
        "--max-mode",
        "0",
        "--output",
        "json",
    ]);
    let echo = json(&out)["config"].clone();
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{}", toml::to_string(&echo).unwrap()).unwrap();
    let (_, again, _) = toroidal(&["verify", "--config", f.path().to_str().unwrap()]);
    assert_eq!(out, again);
}

#[test]
fn out_path_receives_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("report.json");
    let p = p.to_str().unwrap();
    let args = ["tables", "--algebra", "D", "--rank", "4", "--output", "json", "--out", p];
    let (code, out, _) = toroidal(&args);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let doc = json(&std::fs::read_to_string(p).unwrap());
    let entries: Vec<&str> =
        doc["summary"]["diffs"].as_array().unwrap().iter().map(|d| d["entry"].as_str().unwrap()).collect();
    assert_eq!(entries, ["X(-a0)", "a0", "a4"]);
    let (code, _, err) = toroidal(&["tables", "--algebra", "A", "--rank", "3", "--out", "/nonexistent/dir/r.txt"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("/nonexistent/dir/r.txt"));
}

#[test]
fn tables_text_lists_entries_and_cartan() {
    let (code, out, _) = toroidal(&["tables", "--algebra", "C", "--rank", "2"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("paper-literal table:") && out.contains("systematic table:"));
    assert!(out.contains("X(a0) = "));
    assert!(out.contains("cartan:"));
}

#[test]
fn bracket_reproduces_the_a1_display() {
    let (code, out, _) = toroidal(&["bracket", "--algebra", "A", "--rank", "2", "X(a0)", "X(a1)", "--output", "json"]);
    assert_eq!(code, EXIT_PASS);
    let doc = json(&out);
    assert_eq!(doc["summary"]["ddelta_part"], "-1");
    let (_, text, _) = toroidal(&["bracket", "--algebra", "A", "--rank", "3", "X(a0)", "X(a2)"]);
    assert!(text.contains("-:beta* eps2:"), "{text}");
}

#[test]
fn adjudicate_a3_finds_no_diff() {
    let (code, out, _) =
        toroidal(&["adjudicate", "--algebra", "A", "--rank", "3", "--max-degree", "1", "--max-mode", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.contains("no diff between the variants"), "{out}");
}

#[test]
fn adjudicate_b3_itemizes_the_node_n_cartan_entry() {
    let (code, out, _) = toroidal(&[
        "adjudicate",
        "--algebra",
        "B",
        "--rank",
        "3",
        "--max-degree",
        "1/2",
        "--max-mode",
        "1",
        "--output",
        "json",
    ]);
    assert_eq!(code, EXIT_PASS);
    let doc = json(&out);
    let diffs = doc["summary"]["adjudication"]["diffs"].as_array().unwrap();
    let a3 = diffs.iter().find(|d| d["entry"] == "a3").expect("a3 itemized");
    assert_eq!(a3["substitution_failures"], serde_json::Value::Null);
    assert!(a3["literal_instances_affected"].as_u64().unwrap() > 0);
}
