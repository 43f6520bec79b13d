//! End-to-end tests of the binary: golden JSON reports, exit codes, and
//! stream separation.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shearscope"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path}: {e}"))
}

#[test]
fn classify_shear_example_matches_golden() {
    let out = run(&[
        "classify",
        "--json",
        "--map",
        "3*x - 4*y + (x-y)^2",
        "-2*x + y + (x-y)^2",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("classify_shear_example.json"));
}

#[test]
fn classify_degree_gap_example_matches_golden() {
    let out = run(&["classify", "--json", "--map", "x - y^2 - y^5", "y"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("classify_degree_gap_example.json"));
}

#[test]
fn conditions_gap_pair_matches_golden() {
    let out = run(&["check-conditions", "--json", "--map", "x + y^2", "x^6 + y^2"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("conditions_gap_pair.json"));
}

#[test]
fn conditions_gap_set_polynomial_matches_golden() {
    let out = run(&[
        "check-conditions",
        "--json",
        "--map",
        "x^3 + y^3 + x^2*y^2 + y^7",
        "y",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), golden("conditions_gap_set_polynomial.json"));
}

#[test]
fn json_reports_are_deterministic() {
    let args = [
        "classify",
        "--json",
        "--map",
        "x - y^2 - y^5",
        "y",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn parse_errors_exit_with_code_two_and_position() {
    let out = run(&["classify", "--map", "x + + y", "y"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).is_empty());
    let diag = stderr(&out);
    assert!(diag.contains("1:5"), "diagnostic was: {diag}");
}

#[test]
fn singular_linear_part_exits_with_code_three() {
    let out = run(&["classify", "--json", "--map", "x", "x"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("\"verdict\": \"not_jacobian\""));
    assert!(stderr(&out).contains("singular"));
}

#[test]
fn invert_refuses_non_shear_maps() {
    let out = run(&["invert", "--map", "x + y^2", "y + x^2"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stderr(&out).contains("not a shear map"));
}

#[test]
fn invert_emits_the_polynomial_inverse() {
    let out = run(&["invert", "--json", "--map", "x - y^2 - y^5", "y"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["inverse"]["p"], "x + y^2 + y^5");
    assert_eq!(doc["inverse"]["q"], "y");
}

#[test]
fn normal_form_of_degree_gap_example() {
    let out = run(&["normal-form", "--map", "x - y^2 - y^5", "y"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "T = (-y, x), g(u) = -u^2 + u^5");
}

#[test]
fn normal_form_of_affine_map_is_trivial() {
    let out = run(&["normal-form", "--map", "2*x + y - 3", "x + y"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "T = (x, y), g(u) = 0");
}

#[test]
fn decompose_reports_linear_verdict_without_failing() {
    let out = run(&["decompose", "--json", "--map", "x", "y"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["verdict"], "linear");
    assert_eq!(doc["shear"], "linear_map_no_direction");
}

#[test]
fn decompose_rejects_non_divergence_free_map() {
    let out = run(&["decompose", "--map", "x + y^2", "y + (x + y^2)^2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn map_can_be_read_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.txt");
    let mut file = std::fs::File::create(&path).unwrap();
    writeln!(file, "x - y^2 - y^5").unwrap();
    writeln!(file, "y").unwrap();
    let out = run(&["classify", "--json", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("classify_degree_gap_example.json"));
}

#[test]
fn enumerate_small_sweep_has_pinned_counts() {
    // Golden counts pinned from a verified run; the degree-2 slice is
    // cross-checked against the naive full enumeration in the unit tests.
    let out = run(&["enumerate", "--max-degree", "2"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["result"]["total_candidates"], 81);
    assert_eq!(doc["result"]["divergence_free_count"], 81);
    assert_eq!(doc["result"]["divfree_jacobian_count"], 5);
    assert_eq!(doc["result"]["shear_decomposed_count"], 5);
    assert_eq!(doc["result"]["out_of_set_candidates"], 72);
    assert_eq!(doc["result"]["counterexamples"], serde_json::json!([]));
}

#[test]
fn enumerate_rejects_low_degree_bound() {
    let out = run(&["enumerate", "--max-degree", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("max_degree"));
}

#[test]
fn enumerate_random_mode_is_deterministic() {
    let args = [
        "enumerate",
        "--max-degree",
        "2",
        "--mode",
        "random",
        "--count",
        "1000",
        "--seed",
        "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn budget_flag_and_environment_are_honored() {
    let out = run(&["enumerate", "--max-degree", "3", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(6));
    assert!(stderr(&out).contains("budget"));

    let out = run_with_env(&["enumerate", "--max-degree", "3"], "SHEARSCOPE_BUDGET", "100");
    assert_eq!(out.status.code(), Some(6));

    // The flag wins over the environment.
    let out = run_with_env(
        &["enumerate", "--max-degree", "2", "--budget", "1000"],
        "SHEARSCOPE_BUDGET",
        "1",
    );
    assert!(out.status.success());
}

#[test]
fn cross_check_slice_runs_from_the_cli() {
    let out = run(&[
        "enumerate",
        "--max-degree",
        "2",
        "--cross-check",
        "c2_i",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["slice"], "c2_i");
    assert_eq!(doc["result"]["counterexamples"], serde_json::json!([]));
}

#[test]
fn human_reports_go_to_stdout_only() {
    let out = run(&["classify", "--map", "x - y^2 - y^5", "y"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict: shear"));
    assert!(stderr(&out).is_empty());
}
