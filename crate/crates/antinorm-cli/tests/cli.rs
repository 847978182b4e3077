//! End-to-end tests against the compiled binary: catalog listing, exit-code
//! contract, determinism of the rendered output, and the file round trips.

use std::path::Path;
use std::process::{Command, Output};

fn antinorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(args)
        .env_remove("ANTINORM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

/// Drops the trailing (seconds) column of every CSV row; wall time is
/// excluded from the determinism contract.
fn strip_seconds(csv: &str) -> String {
    csv.lines()
        .map(|line| line.rsplit_once(',').map_or(line, |(head, _)| head).to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn list_prints_the_full_catalog() {
    let out = antinorm(&["list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 31, "one line per catalog entry");
    assert!(lines[0].starts_with("rotfeld_trace"));
    for id in [
        "minkowski",
        "thm41_norm",
        "cor410",
        "eq51",
        "cex_nonconvex_g",
        "cex_expansive_antinorm",
        "open_expansive_schatten",
        "open_contraction_symmetric_norm",
    ] {
        assert!(
            lines.iter().any(|l| l.starts_with(id)),
            "catalog lists {id}"
        );
    }
    for line in &lines {
        assert!(
            line.contains("check") || line.contains("search"),
            "entry line carries its kind: {line}"
        );
    }
}

#[test]
fn run_passes_and_is_deterministic_modulo_timing() {
    let args = [
        "run", "minkowski", "cor45", "--n", "2,3", "--trials", "20", "--seed", "7", "--format",
        "csv",
    ];
    let first = antinorm(&args);
    let second = antinorm(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(second.status.code(), Some(0));
    let a = stdout(&first);
    assert!(a.starts_with("check_id,dims,trials,pass,worst_margin,seconds"));
    assert!(a.contains("minkowski,2|3,40,pass,"), "20 trials per dim: {a}");
    assert!(a.contains("cor45,2|3,80,pass,"), "two bindings, two dims: {a}");
    assert_eq!(
        strip_seconds(&a),
        strip_seconds(&stdout(&second)),
        "identical argv gives identical rows"
    );
}

#[test]
fn text_rendering_carries_verdicts_and_a_summary() {
    let out = antinorm(&["run", "minkowski", "--n", "4", "--trials", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("check: minkowski"));
    assert!(text.contains("verdict: pass"));
    assert!(text.contains("worst_margin:"));
    assert!(text.contains("summary: 1 run, 1 pass, 0 fail, 0 hypotheses-not-met"));
}

#[test]
fn a_failed_check_exits_one() {
    // The square root is operator concave, so the expansive search can never
    // find a violation for it; a cex target without a find is a failure.
    let out = antinorm(&[
        "run",
        "cex_expansive_antinorm",
        "--fn",
        "sqrt",
        "--budget",
        "300",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("verdict: fail"));
    assert!(text.contains("summary: 1 run, 0 pass, 1 fail, 0 hypotheses-not-met"));
}

#[test]
fn gated_out_bindings_report_hypotheses_not_met_and_exit_zero() {
    let out = antinorm(&[
        "run",
        "rotfeld_trace",
        "--fn",
        "pow(2)",
        "--n",
        "2",
        "--trials",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "no claim is not a failure");
    assert!(stdout(&out).contains("verdict: hypotheses-not-met"));
}

#[test]
fn usage_errors_exit_two_with_a_one_line_diagnostic() {
    for args in [
        vec!["run", "nonsense"],
        vec!["run", "minkowski", "--q", "1.5"],
        vec!["run", "minkowski", "--spectrum", "bogus"],
        vec!["run", "minkowski", "--spec", "not_a_spec(3)"],
        vec!["search", "minkowski"],
        vec!["report", "/nonexistent/path.json"],
        vec!["run", "lee_block", "--n", "2,3", "--m", "1"],
    ] {
        let out = antinorm(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "one-line diagnostic, got: {err}");
        assert!(err.starts_with("antinorm: "), "diagnostic prefix: {err}");
    }
    // Unknown flags are rejected by the argument parser itself.
    let out = antinorm(&["--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_env_var_matches_the_flag_and_rejects_garbage() {
    let flagged = antinorm(&[
        "run", "minkowski", "--n", "3", "--trials", "15", "--seed", "123", "--format", "csv",
    ]);
    let via_env = Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(["run", "minkowski", "--n", "3", "--trials", "15", "--format", "csv"])
        .env("ANTINORM_SEED", "123")
        .output()
        .expect("binary runs");
    assert_eq!(
        strip_seconds(&stdout(&flagged)),
        strip_seconds(&stdout(&via_env))
    );

    let hex = Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(["run", "minkowski", "--n", "3", "--trials", "15", "--format", "csv"])
        .env("ANTINORM_SEED", "0x7B")
        .output()
        .expect("binary runs");
    assert_eq!(
        strip_seconds(&stdout(&flagged)),
        strip_seconds(&stdout(&hex)),
        "0x7B is 123"
    );

    let bad = Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(["run", "minkowski"])
        .env("ANTINORM_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("ANTINORM_SEED"));
}

#[test]
fn json_out_files_reload_through_the_report_command() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("blocks.json");
    let path_str = path.to_str().expect("utf-8 path");

    let run = antinorm(&[
        "run", "fisher", "--n", "3", "--m", "1", "--trials", "25", "--seed", "9", "--format",
        "json", "--out", path_str,
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(stdout(&run).is_empty(), "with --out, stdout stays clean");
    assert!(stderr(&run).contains("wrote"));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("file written"))
            .expect("valid json");
    let arr = doc.as_array().expect("array of reports");
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["check_id"], "fisher");
    assert_eq!(arr[0]["dims"], serde_json::json!([4]));
    assert_eq!(arr[0]["verdict"], "pass");

    let rendered = antinorm(&["report", path_str]);
    assert_eq!(rendered.status.code(), Some(0));
    assert!(stdout(&rendered).contains("check: fisher"));

    let csv = antinorm(&["report", path_str, "--format", "csv"]);
    assert!(stdout(&csv).contains("fisher,4,25,pass,"));
}

#[test]
fn search_writes_a_reloadable_instance_document() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("cex.json");
    let path_str = path.to_str().expect("utf-8 path");

    let search = antinorm(&[
        "search",
        "cex_nonconvex_g",
        "--budget",
        "4000",
        "--out",
        path_str,
    ]);
    assert_eq!(search.status.code(), Some(0));

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("file written"))
            .expect("valid json");
    assert_eq!(doc["target"], "cex_nonconvex_g");
    let found = &doc["found"];
    assert!(!found.is_null(), "the kink violation is found in 10^4 samples");
    assert!(found["margin"].as_f64().expect("margin") < -1e-6);
    let names: Vec<&str> = found["matrices"]
        .as_array()
        .expect("matrices")
        .iter()
        .map(|m| m["name"].as_str().expect("name"))
        .collect();
    assert_eq!(names, ["A", "B"]);

    let rendered = antinorm(&["report", path_str]);
    assert_eq!(rendered.status.code(), Some(0));
    let text = stdout(&rendered);
    assert!(text.contains("check: cex_nonconvex_g"));
    assert!(text.contains("verdict: pass"));
}

#[test]
fn search_csv_summarizes_every_target_deterministically() {
    let args = ["search", "--budget", "400", "--seed", "11", "--format", "csv"];
    let first = antinorm(&args);
    let second = antinorm(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header plus all four targets");
    assert!(lines[1].starts_with("cex_nonconvex_g,"));
    assert!(lines[4].starts_with("open_contraction_symmetric_norm,"));
    assert_eq!(strip_seconds(&text), strip_seconds(&stdout(&second)));
}

#[test]
fn threaded_runs_match_the_serial_rendering() {
    let base = [
        "run", "minkowski", "jensen_det", "cor45", "--n", "2,3", "--trials", "15", "--seed",
        "5", "--format", "csv",
    ];
    let serial = antinorm(&base);
    let mut threaded_args: Vec<&str> = base.to_vec();
    threaded_args.extend(["--threads", "3"]);
    let threaded = antinorm(&threaded_args);
    assert_eq!(
        strip_seconds(&stdout(&serial)),
        strip_seconds(&stdout(&threaded))
    );
}

#[test]
fn help_and_version_exit_zero() {
    let help = antinorm(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = stdout(&help);
    for cmd in ["list", "run", "search", "report"] {
        assert!(text.contains(cmd), "help mentions {cmd}");
    }
    assert_eq!(antinorm(&["--version"]).status.code(), Some(0));
    assert_eq!(antinorm(&["run", "--help"]).status.code(), Some(0));
}

#[test]
fn out_files_are_created_where_asked() {
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("suite.csv");
    let out = antinorm(&[
        "run",
        "minkowski",
        "--n",
        "2",
        "--trials",
        "10",
        "--format",
        "csv",
        "--out",
        path.to_str().expect("utf-8 path"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&path).exists());
    let body = std::fs::read_to_string(&path).expect("readable");
    assert!(body.starts_with("check_id,"));
    assert!(body.trim_end().lines().count() == 2);
}
