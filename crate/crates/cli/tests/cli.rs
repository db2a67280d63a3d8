use std::process::{Command, Output};

use serde_json::Value;

fn qtrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtrace"))
        .args(args)
        .env_remove("QTRACE_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn moment_examples() {
    let o = qtrace(&["moment", "--family", "splus", "--n-dim", "6", "--rows", "1,2", "--cols", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/30");
    assert_eq!(stdout(&qtrace(&["moment", "--family", "oplus", "--n-dim", "4", "--rows", "1", "--cols", "1"])), "0");
    let o = qtrace(&["moment", "--family", "oplus", "--N", "4", "--rows", "1,1", "--cols", "1,1", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "1/4");
}

#[test]
fn fusion_example() {
    let o = qtrace(&["fusion", "--family", "hplus", "--a", "1", "--b", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"11": 1, "0": 1, "": 1}));
}

#[test]
fn decompose_counit() {
    let o = qtrace(&["decompose", "--family", "oplus", "--n-dim", "4", "--phi1", "4", "--phi2", "15", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"]["haar"], "0");
    assert_eq!(v["coefficients"]["counit"], "1");
    assert_eq!(v["coefficients"]["alt"], "0");
}

#[test]
fn semigroup_matches_closed_form() {
    let o = qtrace(&[
        "semigroup", "--family", "splus", "--n-dim", "6", "--phi", "haar", "--t", "1", "--label", "1", "--trunc", "20", "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let series = v["series"].as_f64().unwrap();
    assert!((series - 5.0 * (-1.0f64).exp()).abs() < 1e-9);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(qtrace(&["verify", "rootsys", "--type", "A2", "--radius", "2"]).status.code(), Some(0));
    assert_eq!(qtrace(&["verify", "appendix", "--N", "4..9"]).status.code(), Some(0));
    // The third-degree checks need N >= 6, so these records fail.
    let o = qtrace(&["verify", "snplus", "--N", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("snplus."));
    assert_eq!(qtrace(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn verify_snplus_reports_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = qtrace(&["verify", "snplus", "--N", "6", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let rec = report.as_array().unwrap().iter().find(|r| r["claim_id"] == "snplus.a3_b3").unwrap();
    assert_eq!(rec["computed_values"]["a_3"], "15/4");
    assert_eq!(rec["computed_values"]["b_3"], "11/4");
    assert_eq!(rec["verdict"], "pass");
    let ids: Vec<&str> = report.as_array().unwrap().iter().map(|r| r["claim_id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn usage_and_resource_errors() {
    assert_eq!(qtrace(&["moment", "--family", "splus", "--n-dim", "6", "--rows", "7", "--cols", "1"]).status.code(), Some(2));
    assert_eq!(qtrace(&["moment", "--family", "nope", "--n-dim", "6", "--rows", "1", "--cols", "1"]).status.code(), Some(2));
    assert_eq!(qtrace(&["rootsys", "--type", "E8", "center"]).status.code(), Some(2));
    let long = "1,2,1,2,1,2,1,2";
    let o = qtrace(&["moment", "--family", "splus", "--n-dim", "6", "--rows", long, "--cols", long]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_output_is_stable_with_cold_and_warm_cache() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qtrace"))
            .args(["weingarten", "--family", "hplus", "--n-dim", "5", "--n", "4", "--json"])
            .env("QTRACE_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let cold = run();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let warm = run();
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(qtrace(&["weingarten", "--family", "hplus", "--n-dim", "5", "--n", "4", "--json"]).stdout, cold.stdout);
}

#[test]
fn rootsys_operations() {
    assert_eq!(stdout(&qtrace(&["rootsys", "--type", "G2", "weyl"])), "12");
    assert_eq!(stdout(&qtrace(&["rootsys", "--type", "A1", "dominant", "--weight", "-3"])), "[3]");
    assert_eq!(stdout(&qtrace(&["rootsys", "--type", "A2", "in-lattice", "--weight", "1,1"])), "true");
    let atoms = r#"[{"x": ["1/2"], "p": "1"}]"#;
    assert_eq!(stdout(&qtrace(&["rootsys", "--type", "A1", "condition-ii", "--atoms", atoms])), "true");
    assert_eq!(stdout(&qtrace(&["rootsys", "--type", "A1", "center-support", "--atoms", atoms])), "true");
    let o = qtrace(&["rootsys", "--system", r#"{"cartan": [[2]]}"#, "center", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["points"], serde_json::json!([["0"], ["1/2"]]));
    assert_eq!(stdout(&qtrace(&["rootsys", "suq2", "--c", "3/2", "--m", "2"])), "false");
    assert_eq!(stdout(&qtrace(&["rootsys", "suq2", "--c", "-1", "--m", "6"])), "true");
    let bad = r#"[{"x": ["1/2"], "p": "1/2"}]"#;
    assert_eq!(qtrace(&["rootsys", "--type", "A1", "condition-ii", "--atoms", bad]).status.code(), Some(2));
}
