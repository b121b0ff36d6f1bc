//! End-to-end tests run against the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn steklov(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steklov"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn exact_ball_prints_the_documented_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["exact", "ball", "--dim", "3", "--count", "3"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "value,multiplicity\n0,1\n1,3\n2,5\n3,7\n");
}

#[test]
fn bound_prints_twelve_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["bound", "--dim", "3"], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "9.96396866715\n");
}

#[test]
fn annulus_json_carries_schema_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(
        &["exact", "annulus", "--eps", "0.5", "--count", "2", "--format", "json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["schema"], "steklov-spectrum/v1");
    assert_eq!(v["n"], 3);
    assert_eq!(v["eps"], 0.5);
    let first = v["spectrum"]["entries"][1]["value"].as_f64().unwrap();
    assert!((first - 0.7184910359318372).abs() < 1e-12);
}

#[test]
fn out_of_range_eps_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["exact", "annulus", "--eps", "1.5"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("eps"), "{}", stderr(&out));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["exact", "ball", "--bogus"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "[run]\ndim = 4\ncount = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = steklov(&["exact", "ball", "--config", cfg], dir.path());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "value,multiplicity\n0,1\n1,4\n2,9\n");

    let out = steklov(&["exact", "ball", "--config", cfg, "--dim", "3"], dir.path());
    assert_eq!(stdout(&out), "value,multiplicity\n0,1\n1,3\n2,5\n");
}

#[test]
fn bad_config_values_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(&cfg, "dim = banana\n").unwrap();
    let out = steklov(
        &["exact", "ball", "--config", cfg.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("dim") && err.contains("banana"), "{err}");
}

#[test]
fn mesh_gen_and_check_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ball.smesh");
    let out = steklov(
        &["mesh", "gen", "--h", "0.2", "--mesh-out", path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(path.is_file());

    let out = steklov(
        &["mesh", "check", "--mesh-in", path.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("pass true"), "{text}");
    assert!(text.contains("euler_characteristic 1"), "{text}");
}

#[test]
fn fem_solve_recovers_ball_eigenvalues_coarsely() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(
        &["fem", "solve", "--h", "0.15", "--count", "2", "--modes", "3"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,multiplicity"));
    let rows: Vec<(f64, u32)> = lines
        .map(|l| {
            let (v, m) = l.split_once(',').expect("two fields");
            (v.parse().unwrap(), m.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].0.abs() < 1e-8);
    assert_eq!(rows[0].1, 1);
    assert!((rows[1].0 - 1.0).abs() < 0.05, "{}", rows[1].0);
    assert_eq!(rows[1].1, 3);
    assert!((rows[2].0 - 2.0).abs() < 0.1, "{}", rows[2].0);
    assert_eq!(rows[2].1, 5);
}

#[test]
fn optimize_writes_a_report_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["exp", "optimize", "--out", "reports"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[PASS] annulus-optimizer"), "{text}");

    let parent = dir.path().join("reports");
    let runs: Vec<_> = std::fs::read_dir(&parent).unwrap().collect();
    assert_eq!(runs.len(), 1);
    let run = runs[0].as_ref().unwrap().path();
    for file in ["rows.csv", "verdicts.csv", "report.json"] {
        assert!(run.join(file).is_file(), "missing {file}");
    }
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(run.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["schema"], "steklov-report/v1");
    assert_eq!(json["name"], "optimize");
}

#[test]
fn usage_errors_do_not_create_the_out_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = steklov(&["exp", "optimize", "--dim", "2", "--out", "reports"], dir.path());
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("dim"), "{}", stderr(&out));
    assert!(!dir.path().join("reports").exists());
}
