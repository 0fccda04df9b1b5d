//! End-to-end tests of the `fiberwalk` binary: subcommand behavior, file
//! outputs, exit codes, and byte-level determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fiberwalk"));
    cmd.args(args).env_remove("FIBERWALK_BUDGET");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("fiberwalk-cli-{}-{name}", std::process::id()))
}

// ==== fiber ===========================================================

#[test]
fn fiber_enumerates_the_example() {
    let out = run(&["fiber", "--matrix", &fixture("ex112.json"), "--rhs", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.contains(&"3,0,0") && rows.contains(&"0,1,1"));
}

#[test]
fn fiber_json_carries_count_and_points() {
    let out = run(&["fiber", "--matrix", &fixture("ex112.json"), "--rhs", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["count"], 6);
    assert_eq!(doc["rhs"], serde_json::json!([3]));
    assert_eq!(doc["points"].as_array().unwrap().len(), 6);
}

#[test]
fn empty_fiber_exits_two_with_empty_output() {
    let out = run(&["fiber", "--matrix", &fixture("ex112.json"), "--rhs", "-1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
}

#[test]
fn malformed_matrix_exits_one_with_diagnostic() {
    let path = tmp("bad-matrix.json");
    std::fs::write(&path, "{ not a matrix").unwrap();
    let out = run(&["fiber", "--matrix", path.to_str().unwrap(), "--rhs", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn missing_required_flag_exits_one() {
    let out = run(&["fiber", "--rhs", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("fiber"));
}

// ==== connectivity ====================================================

#[test]
fn connectivity_lex_family_report() {
    let out = run(&[
        "connectivity",
        "--matrix",
        "ak:2",
        "--rhs",
        "0,0,0,0,1",
        "--moves",
        "groebner-lex-ak",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["min_degree"], 2);
    assert_eq!(doc["edge_connectivity"], 1);
    assert_eq!(doc["vertex_connectivity"], 1);
}

#[test]
fn connectivity_graver_family_report() {
    let out = run(&[
        "connectivity",
        "--matrix",
        "ak:2",
        "--rhs",
        "0,0,0,0,1",
        "--moves",
        "graver-ak",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["min_degree"], 6);
    assert_eq!(doc["edge_connectivity"], 6);
}

#[test]
fn connectivity_writes_dot_and_edge_files() {
    let dot = tmp("lex.dot");
    let edges = tmp("lex-edges.csv");
    let out = run(&[
        "connectivity",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        &format!("custom:{}", fixture("ex112_lex.csv")),
        "--dot",
        dot.to_str().unwrap(),
        "--edges",
        edges.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot_text.matches(" -- ").count(), 6);
    assert!(dot_text.contains("label=\"(3,0,0)\""));
    let edge_text = std::fs::read_to_string(&edges).unwrap();
    assert_eq!(edge_text.lines().count(), 6);
}

#[test]
fn connectivity_requires_family_matrix_for_family_moves() {
    let out = run(&[
        "connectivity",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        "graver-ak",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("ak:K"));
}

#[test]
fn connectivity_oracle_moves_match_custom_set() {
    let via_oracle = run(&[
        "connectivity",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        "oracle:3",
        "--json",
    ]);
    let via_custom = run(&[
        "connectivity",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        &format!("custom:{}", fixture("ex112_graver.csv")),
        "--json",
    ]);
    assert_eq!(code(&via_oracle), 0);
    assert_eq!(via_oracle.stdout, via_custom.stdout);
    assert_eq!(json(&via_oracle)["edge_count"], 10);
}

// ==== chain ===========================================================

#[test]
fn chain_reproduces_the_example_mixing_value() {
    let out = run(&[
        "chain",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        &format!("custom:{}", fixture("ex112_graver.csv")),
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["definition_used"], "neg_inverse_log");
    let time = doc["alt_time"].as_f64().unwrap();
    assert!((time - 2.24376).abs() <= 1e-3, "mixing scale {time}");
    assert_eq!(doc["tv_mixing"]["0.25"], 2);
}

#[test]
fn chain_on_disconnected_graph_is_not_applicable() {
    let moves = tmp("partial-moves.csv");
    std::fs::write(&moves, "1,-1,0\n").unwrap();
    let out = run(&[
        "chain",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "3",
        "--moves",
        &format!("custom:{}", moves.display()),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("not applicable"));
}

#[test]
fn chain_empty_fiber_exits_two() {
    let out = run(&[
        "chain",
        "--matrix",
        &fixture("ex112.json"),
        "--rhs",
        "-2",
        "--moves",
        "oracle:3",
    ]);
    assert_eq!(code(&out), 2);
}

// ==== experiments =====================================================

#[test]
fn experiment_family_sweep_is_deterministic_csv() {
    let first = run(&["chain", "experiment", "fig4", "--kmax", "2"]);
    let second = run(&["chain", "experiment", "fig4", "--kmax", "2"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("k,slem_graver,slem_groebner,time_graver,time_groebner")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn experiment_scale_sweep_keeps_graver_at_least_as_fast() {
    let out = run(&["chain", "experiment", "fig5", "--lmax", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("lambda,slem_graver,slem_groebner,time_graver,time_groebner")
    );
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[3] <= cells[4], "row {line}: Graver walk slower");
    }
}

// ==== verify ==========================================================

#[test]
fn verify_suites_pass_and_report_checks() {
    let conj1 = run(&["verify", "conj1", "--k", "2", "--json"]);
    assert_eq!(code(&conj1), 0);
    let doc = json(&conj1);
    assert_eq!(doc["suite"], "conj1");
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));

    let basis = run(&["verify", "graver-basis", "--k", "1..2"]);
    assert_eq!(code(&basis), 0);
    assert!(stdout(&basis).contains("suite graver-basis: pass"));

    let theorem = run(&["verify", "graver-theorem", "--k", "1", "--samples", "2"]);
    assert_eq!(code(&theorem), 0);

    let universality = run(&["verify", "universality", "--k", "2", "--floor", "100"]);
    assert_eq!(code(&universality), 0);
    assert!(stdout(&universality).contains("suite universality: pass"));
}

#[test]
fn verify_rejects_out_of_range_k() {
    let out = run(&["verify", "graver-basis", "--k", "1..9"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("maximum"));
}

// ==== ak ==============================================================

#[test]
fn ak_matrix_prints_the_family_member() {
    let out = run(&["ak", "matrix", "--k", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1 1 0 0 -1 0\n0 0 1 1 0 -1\n0 0 0 0 1 1\n");
    let js = run(&["ak", "matrix", "--k", "1", "--json"]);
    let doc = json(&js);
    assert_eq!(doc["rows"], 3);
    assert_eq!(doc["cols"], 6);
}

#[test]
fn ak_companion_matrix_has_block_shape() {
    let out = run(&["ak", "matrix", "--k", "1", "--bk", "--json"]);
    let doc = json(&out);
    assert_eq!(doc["rows"], 10);
    assert_eq!(doc["cols"], 15);
}

#[test]
fn ak_decompose_reports_levels_and_exports_csv() {
    let csv = tmp("levels.csv");
    let out = run(&[
        "ak",
        "decompose",
        "--rhs",
        "1,0,0,1,2",
        "--json",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["lower"], 0);
    assert_eq!(doc["upper"], 2);
    assert_eq!(doc["empty"], false);
    assert_eq!(doc["total"], 84);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("s,point...\n"));
    assert_eq!(text.lines().count(), 85);
}

#[test]
fn ak_decompose_empty_fiber_exits_two() {
    let out = run(&["ak", "decompose", "--rhs", "-3,0,1", "--json"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["empty"], true);
}

#[test]
fn ak_min_degree_matches_connectivity_report() {
    let out = run(&["ak", "min-degree", "--rhs", "0,0,0,0,1", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["min_degree"], 6);
    let empty = run(&["ak", "min-degree", "--rhs", "-3,0,1"]);
    assert_eq!(code(&empty), 2);
}

#[test]
fn ak_sample_is_deterministic() {
    let first = run(&["ak", "sample", "--k", "1", "--seed", "17", "--count", "3"]);
    let second = run(&["ak", "sample", "--k", "1", "--seed", "17", "--count", "3"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 3);
}

// ==== budgets =========================================================

#[test]
fn env_budget_is_honored_and_flag_wins() {
    let blocked = run_env(
        &["fiber", "--matrix", &fixture("ex112.json"), "--rhs", "3"],
        &[("FIBERWALK_BUDGET", "2")],
    );
    assert_eq!(code(&blocked), 1);
    assert!(stderr(&blocked).contains("budget of 2"));

    let unblocked = run_env(
        &["fiber", "--matrix", &fixture("ex112.json"), "--rhs", "3", "--budget", "10"],
        &[("FIBERWALK_BUDGET", "2")],
    );
    assert_eq!(code(&unblocked), 0);
}

#[test]
fn output_files_are_reproducible() {
    let a = tmp("repro-a.json");
    let b = tmp("repro-b.json");
    for path in [&a, &b] {
        let out = run(&[
            "connectivity",
            "--matrix",
            "ak:2",
            "--rhs",
            "0,0,0,0,1",
            "--moves",
            "graver-ak",
            "--json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
