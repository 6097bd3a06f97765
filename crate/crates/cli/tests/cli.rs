use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rikitake"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&["verify", "--beta", "1"]), 0);
    assert_eq!(code(&["verify", "--beta", "3/2"]), 0);
    assert_eq!(code(&["verify", "--beta", "-2"]), 0);
    assert_eq!(code(&["verify", "--beta", "abc"]), 2);
    assert_eq!(code(&["verify", "--beta", "1/0"]), 2);
    assert_eq!(code(&["verify"]), 2);
}

#[test]
fn verify_beta_zero_skips() {
    let out = run(&["verify", "--beta", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("jacobi-pibeta"));
    assert!(text.contains("SKIPPED"));
    assert!(!text.contains("FAIL "));
    assert!(text.contains("9 pass, 0 fail, 17 skipped"));
}

#[test]
fn verify_json_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    assert_eq!(
        code(&[
            "verify",
            "--beta",
            "0",
            "--seed",
            "7",
            "--json",
            path_str(&path)
        ]),
        0
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["beta"], "0");
    assert_eq!(v["seed"], 7);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 26);
    assert_eq!(checks[0]["name"], "bihamiltonian");
    assert_eq!(checks[25]["name"], "conserved-momentum");
    for c in checks {
        let obj = c.as_object().unwrap();
        assert_eq!(obj.len(), 3);
        match c["status"].as_str().unwrap() {
            "pass" => assert!(c["residual"].is_string()),
            "skipped" => assert!(c["residual"].is_null()),
            other => panic!("unexpected status {other}"),
        }
    }
}

#[test]
fn verify_json_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(
        code(&["verify", "--beta", "1/2", "--json", path_str(&a)]),
        0
    );
    assert_eq!(
        code(&["verify", "--beta", "1/2", "--json", path_str(&b)]),
        0
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn simulate_r3_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r3.csv");
    let args = [
        "simulate",
        "--system",
        "r3",
        "--beta",
        "0",
        "--x0",
        "1,2,3",
        "--dt",
        "1e-3",
        "--steps",
        "50",
        "--out",
        path_str(&out),
    ];
    assert_eq!(code(&args), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y,z,H1,H2");
    assert_eq!(lines.len(), 52);
    for line in &lines[1..] {
        assert!(!line.ends_with(','));
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 6);
    }
    let first: Vec<f64> = lines[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(first, vec![0.0, 1.0, 2.0, 3.0, -0.75, 11.5]);
    // floats round-trip exactly
    for field in lines[10].split(',') {
        let v: f64 = field.parse().unwrap();
        assert_eq!(format!("{v:.16e}"), field);
    }

    let again = dir.path().join("again.csv");
    let mut args2 = args;
    args2[args2.len() - 1] = path_str(&again);
    assert_eq!(code(&args2), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn simulate_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = path_str(&out);
    assert_eq!(
        code(&[
            "simulate",
            "--system",
            "r4",
            "--beta",
            "1",
            "--x0",
            "0.4,0,0.3,0.2",
            "--steps",
            "5",
            "--out",
            o
        ]),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,q1,q2,p1,p2,H,p2_invariant");
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(4).unwrap(), "2.0000000000000001e-1");
    }
    assert_eq!(
        code(&[
            "simulate", "--system", "r3", "--beta", "-1/2", "--x0", "1,2,3", "--steps", "5",
            "--out", o
        ]),
        0
    );
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), "t,x,y,z,Hbeta,Cbeta");
    assert_eq!(
        code(&[
            "simulate", "--system", "r3", "--x0", "1,2,3", "--method", "midpoint", "--steps", "5",
            "--out", o
        ]),
        0
    );
}

#[test]
fn simulate_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = path_str(&out);
    assert_eq!(
        code(&[
            "simulate",
            "--system",
            "r4",
            "--beta",
            "0",
            "--x0",
            "0.4,0,0.3,0.2",
            "--out",
            o
        ]),
        2
    );
    assert_eq!(
        code(&["simulate", "--system", "r3", "--x0", "1,2", "--out", o]),
        2
    );
    assert_eq!(
        code(&["simulate", "--system", "r3", "--x0", "1,2,x", "--out", o]),
        2
    );
    assert_eq!(
        code(&["simulate", "--system", "r3", "--x0", "1,2,3", "--dt", "0", "--out", o]),
        2
    );
    assert_eq!(
        code(&["simulate", "--system", "r3", "--x0", "1,2,3", "--steps", "0", "--out", o]),
        2
    );
    assert_eq!(
        code(&["simulate", "--system", "r5", "--x0", "1,2,3", "--out", o]),
        2
    );
    let missing = dir.path().join("no/such/dir/r.csv");
    assert_eq!(
        code(&[
            "simulate",
            "--system",
            "r3",
            "--x0",
            "1,2,3",
            "--steps",
            "2",
            "--out",
            path_str(&missing)
        ]),
        1
    );
    assert!(!out.exists());
}

fn analyze(args: &[&str]) -> (i32, serde_json::Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn analyze_defaults_pass() {
    let (c, v) = analyze(&["analyze", "--mode", "drift"]);
    assert_eq!(c, 0);
    assert_eq!(v["mode"], "drift");
    assert_eq!(v["params"]["system"], "r3");
    assert_eq!(v["params"]["beta"], "0");
    assert!(v["max_abs"].as_f64().unwrap() <= 1e-8);
    assert_eq!(v["pass"], true);

    let (c, v) = analyze(&["analyze", "--mode", "conjugacy"]);
    assert_eq!(c, 0);
    assert_eq!(v["params"]["beta"], "1");
    assert!(v["max_abs"].as_f64().unwrap() <= 1e-6);

    let (c, v) = analyze(&["analyze", "--mode", "newton-residual", "--beta", "1"]);
    assert_eq!(c, 0);
    assert!(v["max_abs"].as_f64().unwrap() <= 1e-9);
    assert_eq!(
        v.as_object().unwrap().keys().collect::<Vec<_>>(),
        ["max_abs", "mode", "params", "pass"]
    );
}

#[test]
fn analyze_failures_and_usage() {
    let (c, v) = analyze(&[
        "analyze", "--mode", "drift", "--dt", "0.1", "--steps", "100", "--tol", "1e-15",
    ]);
    assert_eq!(c, 1);
    assert_eq!(v["pass"], false);
    assert_eq!(code(&["analyze", "--mode", "conjugacy", "--beta", "0"]), 2);
    assert_eq!(
        code(&["analyze", "--mode", "conjugacy", "--system", "r3"]),
        2
    );
    assert_eq!(code(&["analyze", "--mode", "sideways"]), 2);
    assert_eq!(code(&["analyze", "--mode", "drift", "--x0", "1,2,3,4"]), 2);
}

#[test]
fn analyze_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let out = run(&[
        "analyze",
        "--mode",
        "drift",
        "--system",
        "r4",
        "--steps",
        "100",
        "--out",
        path_str(&path),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
}

#[test]
fn show_catalog() {
    let out = run(&["show", "phi", "--beta", "1/2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "[1*q1; 1*p1; -1/2*q1^2 + 1/2*p1^2 + 1*p2]"
    );
    assert_eq!(code(&["show", "pibeta", "--beta", "0"]), 2);
    assert_eq!(code(&["show", "nothing"]), 2);
}
