//! End-to-end checks of the `distill` binary: exit codes, report round
//! trips, config-file precedence, and output determinism.

use std::process::{Command, Output};

use distill_cli::{EvaluateReport, OptimizeReport, PipelineReport, SimulateReport};
use distill_core::estimators::ComparisonTable;

fn distill(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distill"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = distill(args);
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code_of(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn usage_errors_exit_one_and_name_the_field() {
    let out = distill(&["optimize", "--p-in", "0.01", "--buffer", "0"]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("buffer"));

    let out = distill(&["evaluate", "--seq", "r2z"]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("p_in"));

    let out = distill(&["evaluate", "--seq", "q4.2.2,r2z", "--p-in", "0.01"]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("classical"));

    let out = distill(&["simulate", "--seq", "q8.3.3", "--p-in", "0.01"]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q8.3.3"));

    let out = distill(&["evaluate", "--seq", "r2q", "--p-in", "0.01"]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("r2q"));
}

#[test]
fn unknown_flags_and_bad_values_exit_one() {
    assert_eq!(code_of(&distill(&["optimize", "--frobnicate"])), 1);
    assert_eq!(code_of(&distill(&["optimise"])), 1);
    assert_eq!(
        code_of(&distill(&["simulate", "--seq", "r2z", "--p-in", "abc"])),
        1
    );
    // Help and version are not errors.
    assert_eq!(code_of(&distill(&["--help"])), 0);
    assert_eq!(code_of(&distill(&["optimize", "--help"])), 0);
}

#[test]
fn empty_search_space_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let out = distill(&[
        "optimize",
        "--p-in",
        "0.01",
        "--buffer",
        "10",
        "--catalog",
        empty.to_str().unwrap(),
        "--no-builtin",
    ]);
    assert_eq!(code_of(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("infeasible"));
}

#[test]
fn unreachable_target_exits_two_but_writes_the_report() {
    // One pair of memory admits no sequence at all.
    let out = distill(&["optimize", "--p-in", "0.01", "--buffer", "1"]);
    assert_eq!(code_of(&out), 2);
    let report: OptimizeReport =
        serde_json::from_slice(&out.stdout).expect("report still written");
    assert!(report.search.best.is_none());
    assert!(report.search.nodes_visited > 0);
}

#[test]
fn evaluate_report_round_trips_and_matches_reference() {
    let text = stdout_of(&[
        "evaluate",
        "--seq",
        "r3X,r2Y,r2X,q4.2.2",
        "--p-bell",
        "0.01",
        "--p-gate",
        "0.001",
    ]);
    let report: EvaluateReport = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(report.seq, "r3x,r2y,r2x,q4.2.2");
    assert_eq!(report.input.model, "injected");
    assert_eq!(report.metrics.memory, 8);
    assert!((report.metrics.overhead - 25.269).abs() < 0.01);
}

#[test]
fn optimize_report_round_trips() {
    let text = stdout_of(&[
        "optimize",
        "--p-in",
        "0.01",
        "--buffer",
        "8",
        "--target",
        "1e-9",
        "--l-max",
        "4",
    ]);
    let report: OptimizeReport = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    let best = report.search.best.expect("feasible");
    assert!(best.metrics.memory <= 8);
    assert!(best.metrics.p_per_qubit < 1e-9);
}

#[test]
fn simulate_report_round_trips_and_replays() {
    let args = [
        "simulate",
        "--seq",
        "r2z,r2x",
        "--p-in",
        "0.1",
        "--trials",
        "5000",
        "--seed",
        "42",
    ];
    let text = stdout_of(&args);
    let report: SimulateReport = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(report.estimate.seed, 42);
    // Same seed, same bytes; different seed, different sample.
    assert_eq!(text, stdout_of(&args));
    let other = stdout_of(&[
        "simulate", "--seq", "r2z,r2x", "--p-in", "0.1", "--trials", "5000", "--seed", "43",
    ]);
    assert_ne!(text, other);
}

#[test]
fn simulate_is_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        stdout_of(&[
            "simulate", "--seq", "r2z,r2x,q4.2.2", "--p-in", "0.05", "--trials", "20000",
            "--seed", "9", "--threads", threads,
        ])
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("8"));
}

#[test]
fn compare_report_round_trips() {
    let text = stdout_of(&["compare", "--network-errors", "0.001,0.01", "--buffers", "10"]);
    let table: ComparisonTable = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&table).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(table.rows.len(), 2);
    assert_eq!(table.rows[0].buffered.len(), 1);
}

#[test]
fn pipeline_report_round_trips() {
    let text = stdout_of(&[
        "pipeline",
        "--seq",
        "r3x,r2y,r2x,q4.2.2",
        "--p-bell",
        "0.01",
    ]);
    let report: PipelineReport = serde_json::from_str(&text).unwrap();
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(text, again);
    assert_eq!(report.plan.stages.len(), 5);
    assert_eq!(report.plan.stages[0].id, "injection");
}

#[test]
fn csv_reports_have_fixed_headers() {
    let text = stdout_of(&[
        "evaluate", "--seq", "r2z", "--p-in", "0.1", "--format", "csv",
    ]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "sequence,levels,overhead,memory,p_final,p_per_qubit,batch_outputs"
    );
    assert_eq!(lines.count(), 1);

    let text = stdout_of(&[
        "simulate", "--seq", "r2z", "--p-in", "0.1", "--trials", "100", "--format", "csv",
    ]);
    assert!(text.starts_with(
        "sequence,seed,trials,attempt_cap,aborted,p_fail,p_fail_radius,p_out,p_out_radius,consumed_per_output,consumed_radius"
    ));

    let text = stdout_of(&["compare", "--network-errors", "0.01", "--format", "csv"]);
    assert!(text.starts_with(
        "p_bell,injected_error,scheme,feasible,overhead,levels,memory,sequence,d,bell_pairs,note"
    ));
    // One row per scheme cell: alternating, optimized pairs, surgery.
    assert_eq!(text.lines().count(), 4);

    let text = stdout_of(&[
        "pipeline", "--seq", "r2z", "--p-in", "0.1", "--format", "csv",
    ]);
    assert!(text.starts_with("level,id,n,k,b,t_input,t_distill,b_all,batch_size,batch_period"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let text = stdout_of(&["evaluate", "--seq", "r2z,r2x", "--p-in", "0.05"]);
    let out = distill(&[
        "evaluate",
        "--seq",
        "r2z,r2x",
        "--p-in",
        "0.05",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&out), 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"seq": "r2z,r2x", "p_in": 0.1, "trials": 700, "seed": 3}"#,
    )
    .unwrap();
    let text = stdout_of(&["simulate", "--config", cfg.to_str().unwrap()]);
    let report: SimulateReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.trials, 700);
    assert_eq!(report.estimate.seed, 3);

    let text = stdout_of(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "200",
    ]);
    let report: SimulateReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.trials, 200);
    assert_eq!(report.estimate.seed, 3);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"seq": "r2z", "p_in": 0.1, "wat": 1}"#).unwrap();
    let out = distill(&["simulate", "--config", bad.to_str().unwrap()]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("wat"));
}

#[test]
fn input_model_is_exclusive_and_p0_flags_apply() {
    let out = distill(&[
        "evaluate", "--seq", "r2z", "--p-in", "0.1", "--p-bell", "0.01",
    ]);
    assert_eq!(code_of(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("p_in"));

    // Explicit rejection rate sets the discard probability 1-(1-p)^2.
    let text = stdout_of(&[
        "evaluate", "--seq", "", "--p-in", "0.05", "--p-reject", "0.08",
    ]);
    let report: EvaluateReport = serde_json::from_str(&text).unwrap();
    assert!((report.input.p0_reject - 0.1536).abs() < 1e-15);
    assert!((report.metrics.overhead - 1.0 / (1.0 - 0.1536)).abs() < 1e-12);

    // Direct override wins.
    let text = stdout_of(&[
        "evaluate", "--seq", "", "--p-in", "0.05", "--p-reject", "0.08", "--p0-reject", "0.5",
    ]);
    let report: EvaluateReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.input.p0_reject, 0.5);
    assert!((report.metrics.overhead - 2.0).abs() < 1e-12);
}
