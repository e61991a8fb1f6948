mod common;

use std::process::{Command, Output};

use common::fixture;

fn tdsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdsynth")).args(args).output().unwrap()
}

fn fig1() -> String {
    fixture("fig1.json").display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn synth_phi1() {
    let o = tdsynth(&[
        "synth", "--system", &fig1(), "--formula", "F[1,5] ap2 & F[1,5] ap4", "--hmin", "5", "--hmax", "15",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found at horizon 11"));
}

#[test]
fn synth_not_found_exits_one() {
    let o = tdsynth(&["synth", "--system", &fig1(), "--formula", "!ap2 U[3,5] ap3", "--hmin", "1", "--hmax", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not found up to horizon 6"));
}

#[test]
fn synth_phi2_up_to_nine() {
    let o = tdsynth(&["synth", "--system", &fig1(), "--formula", "!ap2 U[3,5] ap3", "--hmin", "5", "--hmax", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("found at horizon 7"));
}

#[test]
fn check_bundled_fragments() {
    let pi1 = fixture("pi1.json").display().to_string();
    let pi2 = fixture("pi2.json").display().to_string();
    for (frag, phi, code) in [
        (&pi1, "F[1,5] ap4", 0),
        (&pi1, "F[1,5] ap2 & F[1,5] ap4", 0),
        (&pi2, "!ap2 U[3,5] ap3", 0),
        (&pi1, "F[0,0] ap4", 1),
    ] {
        let o = tdsynth(&["check", "--fragment", frag, "--formula", phi]);
        assert_eq!(o.status.code(), Some(code), "{phi}: {}", stderr(&o));
    }
}

#[test]
fn check_with_explicit_system_and_timers() {
    let dir = tempfile::tempdir().unwrap();
    let o = tdsynth(&[
        "synth", "--system", &fig1(), "--formula", "F[1,5] ap4", "--hmin", "3", "--hmax", "3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let path = dir.path().join("frag.json");
    std::fs::write(&path, v["fragment"].to_string()).unwrap();
    let o = tdsynth(&[
        "check", "--fragment", path.to_str().unwrap(), "--system", &fig1(), "--formula", "F[1,5] ap4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn output_is_byte_identical() {
    let args = [
        "synth", "--system", &fig1(), "--formula", "F[1,5] ap2 & F[1,5] ap4", "--hmin", "5", "--hmax", "12", "--format",
        "json",
    ];
    let a = tdsynth(&args);
    let b = tdsynth(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["outcome"], "found");
    assert_eq!(v["horizon"], 11);
}

#[test]
fn build_reports_states_and_dot() {
    let o = tdsynth(&["build", "--system", &fig1(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["states"], 28);
    let o = tdsynth(&["build", "--system", &fig1(), "--format", "dot", "--untimed"]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = tdsynth(&[
        "synth", "--system", &fig1(), "--formula", "F[1,5] ap4", "--hmax", "4", "--format", "dot",
    ]);
    assert!(stdout(&o).contains("red"));
}

#[test]
fn oracle_and_dump() {
    let o = tdsynth(&["oracle", "--system", &fig1(), "--formula", "!ap2 U[3,5] ap3", "--hmin", "7", "--hmax", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let o = tdsynth(&["oracle", "--system", &fig1(), "--formula", "F[0,0] ap2", "--hmax", "8", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("budget"));
    let o = tdsynth(&["dump-ilp", "--system", &fig1(), "--formula", "F[1,5] ap4", "--horizon", "3", "--mode", "paper"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("w[3][0]") && text.contains("ze[2]") && text.contains("z[Until#2][0,3]"));
}

#[test]
fn input_errors_exit_two_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"states\": [").unwrap();
    let o = tdsynth(&["build", "--system", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json"));

    let o = tdsynth(&["synth", "--system", &fig1(), "--formula", "ap1 U[3,1] ap2", "--hmax", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("syntax error at 5"));

    let o = tdsynth(&["build", "--system", &fig1(), "--state-cap", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = tdsynth(&["synth", "--system", &fig1(), "--formula", "ap9", "--hmax", "2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = tdsynth(&["synth", "--system", &fig1()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["tdsynth", "build", "--system", &fig1()];
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tdsynth::cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, tdsynth(&args[1..]).stdout);
}
