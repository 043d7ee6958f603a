use std::process::{Command, Stdio};
use std::io::Write;

use p1geom::cli::run_with;

const FIRST_CYCLE: &str = "0 0 1 0 0 1 0 0 0 0 1 0";

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("p1geom").chain(args.iter().copied());
    let code = run_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_cycle_exists() {
    let (code, out, _) = run(&["check", "--n", "3", "--rho", "zero", "--theta", "keep", "--format", "vector"], FIRST_CYCLE);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "exists=true"));
    assert!(out.contains("s_star=1/4"));
}

#[test]
fn fit_cycle_is_uniform() {
    let (code, out, _) = run(&["fit"], FIRST_CYCLE);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let probs = v["probabilities"].as_array().unwrap();
    assert_eq!(probs.len(), 12);
    assert!(probs.iter().all(|p| (p.as_f64().unwrap() - 0.25).abs() < 1e-12));
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["facial_set"].as_array().unwrap().len(), 12);
}

#[test]
fn census_row() {
    let (code, out, _) = run(&["census", "--n", "4", "--rho", "const"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().nth(1).unwrap(), "4,const,keep,4096,3150,48,96");
}

#[test]
fn census_is_deterministic_across_jobs() {
    let (_, one, _) = run(&["census", "--n", "3", "--jobs", "1"], "");
    let (_, four, _) = run(&["census", "--n", "3", "--jobs", "4"], "");
    let (_, again, _) = run(&["census", "--n", "3", "--jobs", "4"], "");
    assert_eq!(one, four);
    assert_eq!(four, again);
    let (_, json, _) = run(&["census", "--n", "3", "--rho", "zero", "--json"], "");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["distinct_statistics"], 63);
    assert!(v[0].get("runtime").is_none());
}

#[test]
fn matrix_and_stat() {
    let (code, out, _) = run(&["matrix", "--n", "3", "--rho", "edge"], "");
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 15);
    assert!(out.starts_with("param,\"p_{1,2}(0,0)\""));
    let (code, out, _) = run(&["stat", "--format", "incidence", "--theta", "drop"], "x 1 0\n0 x 1\n1 0 x\n");
    assert_eq!(code, 0);
    assert!(out.contains("alpha_1,1"));
    assert!(!out.contains("theta"));
}

#[test]
fn tables() {
    let (_, out, _) = run(&["facets", "--n", "4"], "");
    assert_eq!(out.lines().nth(1).unwrap(), "4,132,12,14,348,13,15,148,16,19");
    let (_, out, _) = run(&["vertices", "--n", "3"], "");
    assert_eq!(out.lines().nth(1).unwrap(), "3,62,62,62,12");
    let (_, out, _) = run(&["vertices", "--n", "3", "--rho", "zero", "--list"], "");
    assert_eq!(out.lines().count(), 63);
    let (_, out, _) = run(&["facets", "--n", "3", "--rho", "edge", "--list"], "");
    assert_eq!(out.lines().count(), 16);
    let (_, out, _) = run(&["patterns", "--n", "3"], "");
    assert_eq!(out.matches("# pattern").count(), 3);
    let (_, out, _) = run(&["patterns", "--n", "3", "--all"], "");
    assert_eq!(out.matches("# pattern").count(), 9);
    let (_, out, _) = run(&["conjecture", "--from", "3", "--to", "4"], "");
    assert_eq!(out, "n,facets,predicted,row_col_zero,subtle,count_agrees,split_agrees\n3,9,9,6,3,true,true\n4,12,12,8,4,true,true\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "--bogus"], FIRST_CYCLE).0, 2);
    assert_eq!(run(&["census", "--n", "5"], "").0, 2);
    assert_eq!(run(&["matrix", "--n", "2"], "").0, 2);
    assert_eq!(run(&["fit", "--tol", "0"], FIRST_CYCLE).0, 2);
    assert_eq!(run(&["check", "--rho", "sideways"], FIRST_CYCLE).0, 2);
    let (code, _, err) = run(&["check"], "0 1 1");
    assert_eq!(code, 1);
    assert!(err.contains("<stdin>"));
    let (code, _, err) = run(&["check", "/nonexistent/net.txt"], "");
    assert_eq!(code, 1);
    assert!(err.contains("/nonexistent/net.txt"));
    let (code, _, err) = run(&["check", "--n", "4"], FIRST_CYCLE);
    assert_eq!(code, 1);
    assert!(err.contains("--n"));
    assert_eq!(run(&["--help"], "").0, 0);
    for sub in ["matrix", "stat", "check", "fit", "census", "vertices", "facets", "patterns", "conjecture"] {
        let (code, out, _) = run(&[sub, "--help"], "");
        assert_eq!(code, 0, "{sub}");
        assert!(out.contains("Usage"), "{sub}");
    }
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let (code, out, _) = run(&["matrix", "--n", "3", "--out", path.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("param,"));
}

#[test]
fn binary_exit_status() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_p1geom"))
        .args(["check", "--format", "vector"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(FIRST_CYCLE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("exists=true"));
    let bad = Command::new(env!("CARGO_BIN_EXE_p1geom")).args(["nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
