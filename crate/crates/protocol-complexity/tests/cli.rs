//! Behavioral tests for the `pci` binary: output formats, ordering,
//! diagnostics, and file layout. The exit-code matrix and determinism
//! live in the acceptance suite.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pci")
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn validate_says_nothing_about_valid_files() {
    let out = run(&["validate", fixture("unit/minimal_pair.cpt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(out.stderr.is_empty());
}

#[test]
fn validate_prints_one_positioned_diagnostic_per_defect() {
    let cases = [
        ("invalid/bad_number.cpt", "4:14 BadNumber"),
        ("invalid/unknown_kind.cpt", "4:3 UnknownKind"),
        ("invalid/unterminated.cpt", "4:16 UnterminatedString"),
        ("invalid/missing_duration.cpt", "4:21 MissingHeader"),
        ("invalid/nonmonotone.cpt", "5:1 InvalidTranscript"),
        ("invalid/role_mismatch.cpt", "5:1 InvalidTranscript"),
        ("invalid/dangling_ref.cpt", "5:1 InvalidTranscript"),
        ("invalid/missing_events.json", "MissingHeader"),
    ];
    for (rel, needle) in cases {
        let path = fixture(rel);
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{rel}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{rel}: {err}");
        let line = err.lines().next().unwrap();
        assert!(line.starts_with(&format!("{}:", path.display())), "{rel}: {line}");
        assert!(line.contains(needle), "{rel}: {line}");
    }
}

#[test]
fn validate_flags_only_the_broken_files_in_a_mixed_directory() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.cpt", "b.cpt", "c.cpt"] {
        std::fs::copy(fixture("unit/minimal_pair.cpt"), dir.path().join(name)).unwrap();
    }
    std::fs::copy(fixture("invalid/bad_number.cpt"), dir.path().join("zz.cpt")).unwrap();
    let out = run(&["validate", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("zz.cpt:4:14 BadNumber"));
}

fn report_lines(dir: &Path) -> Vec<String> {
    std::fs::read_to_string(dir.join("report.csv"))
        .expect("report written")
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn analyze_emits_the_documented_golden_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        fixture("unit").to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let lines = report_lines(tmp.path());
    assert_eq!(
        lines[0],
        "protocol_id,task_name,pci_bits,opci_bits,gap_bits,ratio,duration_s,perf_index_bits_per_s,group_key"
    );
    assert_eq!(
        lines[1],
        "unit-minimal,bench-pair,6.000000,6.000000,0.000000,1.000000,30.000000,0.200000,"
    );
    assert_eq!(
        lines[2],
        "unit-typeii,lever-pick,8.000000,6.000000,2.000000,1.333333,40.000000,0.200000,"
    );
    // The interchange twin of the same protocol produces an identical row.
    assert_eq!(lines[3], lines[2]);
    assert_eq!(lines.len(), 4);
}

#[test]
fn analyze_orders_rows_by_protocol_across_input_directories() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        fixture("faucet").to_str().unwrap(),
        fixture("car_elevation").to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let ids: Vec<String> = report_lines(tmp.path())
        .iter()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["car01", "car02", "car03", "faucet01", "faucet02"]);
}

#[test]
fn analyze_copies_the_requested_meta_key_into_the_group_column() {
    let tmp = tempfile::tempdir().unwrap();
    run(&[
        "analyze",
        fixture("car_elevation").to_str().unwrap(),
        "--group-key",
        "experience",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let groups: Vec<String> = report_lines(tmp.path())
        .iter()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().to_string())
        .collect();
    assert_eq!(groups, ["novice", "intermediate", "expert"]);
}

#[test]
fn analyze_writes_nothing_when_any_transcript_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("unit/minimal_pair.cpt"), dir.path().join("good.cpt")).unwrap();
    std::fs::copy(fixture("invalid/nonmonotone.cpt"), dir.path().join("bad.cpt")).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        dir.path().to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad.cpt:5:1 InvalidTranscript"));
    assert!(!tmp.path().join("report.csv").exists());
}

#[test]
fn analyze_namespaces_outputs_that_would_land_in_an_input_directory() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("unit/minimal_pair.cpt"), dir.path().join("a.cpt")).unwrap();
    let out = run(&[
        "analyze",
        dir.path().to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(dir.path().join("reports/report.csv").exists());
    assert!(!dir.path().join("report.csv").exists());
}

#[test]
fn emit_graph_exports_edge_lists_and_task_tables() {
    let tmp = tempfile::tempdir().unwrap();
    run(&[
        "analyze",
        fixture("unit/typeii.cpt").to_str().unwrap(),
        "--emit-graph",
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let edges = std::fs::read_to_string(tmp.path().join("graphs/unit-typeii.edges")).unwrap();
    assert_eq!(
        edges,
        "0 1 inferred_adjacency\n1 2 inferred_adjacency\n2 3 inferred_adjacency\n\
         3 4 inferred_adjacency\n4 sink terminal_completion\n"
    );
    let tasks = std::fs::read_to_string(tmp.path().join("graphs/unit-typeii.tasks.csv")).unwrap();
    assert_eq!(tasks, "task_index,start_seq,end_seq,type\n0,0,4,II\n");
}

#[test]
fn baseline_prints_the_closed_form_in_bits() {
    let out = run(&["baseline", "--shape", "L=2,N=2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "opci_bits 24.754888\n");

    let out = run(&["baseline", "--shape", "L=1,N="]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "opci_bits 2.000000\n");
}

#[test]
fn regress_reports_the_fit_and_writes_json_on_request() {
    let tmp = tempfile::tempdir().unwrap();
    run(&[
        "analyze",
        fixture("car_elevation").to_str().unwrap(),
        fixture("faucet").to_str().unwrap(),
        fixture("unit").to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let report = tmp.path().join("report.csv");
    let json_path = tmp.path().join("fit.json");
    let out = run(&[
        "regress",
        report.to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    for key in ["n ", "slope ", "intercept ", "se_estimate ", "p_value_slope ", "r_squared "] {
        assert!(text.lines().any(|l| l.starts_with(key)), "missing {key} in: {text}");
    }

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(doc["n"], 8);
    let slope_line = text.lines().find(|l| l.starts_with("slope ")).unwrap();
    let printed: f64 = slope_line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((doc["slope"].as_f64().unwrap() - printed).abs() < 5e-7);
}

#[test]
fn regress_reverse_swaps_the_axes() {
    let tmp = tempfile::tempdir().unwrap();
    run(&[
        "analyze",
        fixture("car_elevation").to_str().unwrap(),
        fixture("faucet").to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    let report = tmp.path().join("report.csv");
    let fwd = run(&["regress", report.to_str().unwrap()]);
    let rev = run(&["regress", report.to_str().unwrap(), "--reverse"]);
    assert_eq!(fwd.status.code(), Some(0));
    assert_eq!(rev.status.code(), Some(0));
    let slope = |o: &Output| -> f64 {
        stdout(o)
            .lines()
            .find(|l| l.starts_with("slope "))
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let (a, b) = (slope(&fwd), slope(&rev));
    assert!(a > 1.0, "duration per bit should exceed 1 s: {a}");
    assert!(b < 1.0, "bits per second of duration should be below 1: {b}");
}

#[test]
fn sensitivity_writes_the_documented_sweep_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out_csv = tmp.path().join("sweep.csv");
    let out = run(&["sensitivity", "--steps", "10,100", "--out", out_csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&out_csv).unwrap(),
        "pct,pci_vs_ic_bits,pci_vs_k_bits\n\
         10.000000,5.005016,4.400000\n\
         100.000000,16.000000,8.000000\n"
    );
}

#[test]
fn sensitivity_defaults_cover_the_full_percentage_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let out_csv = tmp.path().join("sweep.csv");
    let out = run(&["sensitivity", "--out", out_csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&out_csv).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 501);
    assert!(lines[1].starts_with("10.000000,"));
    assert!(lines[500].starts_with("5000.000000,"));
}
