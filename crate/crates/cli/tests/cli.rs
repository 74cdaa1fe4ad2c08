use std::process::{Command, Output};

fn osl2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osl2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_json_is_byte_identical_across_runs() {
    let args = ["--format", "json", "verify", "conjugacy", "--n-max", "3", "--samples", "2"];
    let a = osl2(&args);
    let b = osl2(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["summary"]["falsified"], 0);
}

#[test]
fn seed_changes_sampled_instances() {
    let run = |seed: &str| {
        stdout(&osl2(&["--format", "json", "--seed", seed, "verify", "springer", "--n-max", "3", "--samples", "2"]))
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn usage_and_parse_errors_exit_nonzero() {
    assert_eq!(osl2(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(osl2(&["verify", "tilting", "--primes", "4"]).status.code(), Some(2));
    assert_eq!(osl2(&["tilt", "--partition", "3,x", "--p", "3"]).status.code(), Some(2));
    assert_ne!(osl2(&["frobnicate"]).status.code(), Some(0));
}

#[test]
fn resource_limit_exits_nonzero() {
    let o = osl2(&["--budget", "1", "optimal", "gcr", "--partition", "2,1", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource"));
}

#[test]
fn precondition_failure_exits_nonzero() {
    let o = osl2(&["optimal", "build", "--partition", "3", "--p", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn optimal_build_over_q_and_fp() {
    for p in ["Q", "3"] {
        let o = osl2(&["--format", "json", "optimal", "build", "--partition", "3,2", "--p", p]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["verified"], true);
        assert_eq!(v["witness"]["psi_weights"], serde_json::json!([2, 0, -2, 1, -1]));
    }
}

#[test]
fn tilt_golden() {
    let o = osl2(&["tilt", "--partition", "3", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r(0)=1 v(2)=1"));
}

#[test]
fn springer_apply_then_invert() {
    let coeffs = r#"{"p":5,"a":[1,2]}"#;
    let u = r#"{"domain":"Fp","p":5,"rows":3,"cols":3,"entries":[[1,1,0],[0,1,1],[0,0,1]]}"#;
    let x = osl2(&["--format", "json", "springer", "apply", "--coeffs", coeffs, "--matrix", u]);
    assert_eq!(x.status.code(), Some(0));
    let x = stdout(&x);
    let back = osl2(&["--format", "json", "springer", "invert", "--coeffs", coeffs, "--matrix", &x]);
    let got: serde_json::Value = serde_json::from_slice(&back.stdout).unwrap();
    let want: serde_json::Value = serde_json::from_str(u).unwrap();
    assert_eq!(got, want);
}

#[test]
fn mixed_fields_are_rejected() {
    let o = osl2(&[
        "springer",
        "apply",
        "--coeffs",
        r#"{"p":"Q","a":[1]}"#,
        "--matrix",
        r#"{"domain":"Fp","p":3,"rows":2,"cols":2,"entries":[[1,1],[0,1]]}"#,
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demos_run() {
    for which in ["springer-tangent", "serre-note"] {
        let o = osl2(&["--format", "json", "demo", which, "--samples", "1"]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn orbit_table_lists_every_partition() {
    let o = osl2(&["--format", "json", "orbit-table", "--n", "5", "--p", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
}
