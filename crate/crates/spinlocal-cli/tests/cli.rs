use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spinlocal"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spinlocal-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(args: &[&str], name: &str) -> (Output, Value) {
    let path = scratch(name);
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--out", &p]);
    let out = run(&all);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("no report: {}", String::from_utf8_lossy(&out.stderr)));
    (out, serde_json::from_str(&text).unwrap())
}

#[test]
fn s_table_report_has_eight_values() {
    let (out, r) = report(&["verify", "s-table", "--q", "3"], "s-table.json");
    assert!(out.status.success());
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(r["summary"]["failed"], 0);
    assert_eq!(r["config"]["q"], 3);
    assert_eq!(r["schema"], 1);
}

#[test]
fn hecke_composites_at_five() {
    let (out, r) = report(&["verify", "hecke-composites", "--q", "5", "--radius", "1"], "hc.json");
    assert!(out.status.success());
    assert!(r["summary"]["total"].as_u64().unwrap() > 0);
    assert_eq!(r["summary"]["failed"], 0);
}

#[test]
fn unknown_suite_is_an_error_with_usage() {
    let out = run(&["verify", "unknown"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown suite"), "{err}");
    assert!(err.contains("Usage"), "{err}");
    assert!(err.contains("hecke-composites"), "{err}");
}

#[test]
fn guardrails_reject_large_parameters() {
    assert!(!run(&["verify", "hecke-composites", "--q", "17"]).status.success());
    assert!(!run(&["verify", "hecke-composites", "--radius", "4"]).status.success());
    assert!(!run(&["verify", "hecke-composites", "--q", "9"]).status.success());
}

#[test]
fn list_names_every_suite() {
    let out = run(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("multiplicity → depends only on L_Λ ∈ VL(0)"));
    assert!(text.contains("nabla-row → Define the potential map"));
    assert_eq!(text.lines().count(), 13);
    assert_eq!(text, String::from_utf8(run(&["list"]).stdout).unwrap());
}

#[test]
fn reports_are_deterministic_up_to_timestamp() {
    let args = ["verify", "admissible-local", "--seed", "9", "--samples", "12"];
    let (_, mut a) = report(&args, "adm-a.json");
    let (_, mut b) = report(&args, "adm-b.json");
    a["timestamp"] = Value::Null;
    b["timestamp"] = Value::Null;
    assert_eq!(a, b);
    let ids: Vec<(String, u64, String)> = a["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let id = c["identity"].as_str().unwrap().to_string();
            (id, c["q"].as_u64().unwrap(), c["inputs"].as_str().unwrap().to_string())
        })
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn report_dir_from_environment() {
    let dir = scratch("envdir");
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin().args(["verify", "t-circ", "--q", "3"]).env("SPINLOCAL_REPORT_DIR", &dir).output().unwrap();
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("t-circ.json")).unwrap()).unwrap();
    assert_eq!(r["suite"], "t-circ");
}

#[test]
fn config_file_supplies_defaults() {
    let cfg = scratch("cfg.json");
    std::fs::write(&cfg, r#"{"q": 5, "trace_bound": 3}"#).unwrap();
    let (out, r) = report(&["verify", "theta-basic", "--config", cfg.to_str().unwrap(), "--seed", "4"], "theta-cfg.json");
    assert!(out.status.success());
    assert_eq!(r["config"]["q"], 5);
    assert_eq!(r["config"]["trace_bound"], 3);
    assert_eq!(r["config"]["seed"], 4);
}

#[test]
fn theta_coefficients_of_a2() {
    let gram = scratch("a2.json");
    std::fs::write(&gram, "[[2,1],[1,2]]").unwrap();
    let out_path = scratch("a2-coeffs.json");
    let out = run(&[
        "theta",
        "--gram",
        gram.to_str().unwrap(),
        "--n",
        "1",
        "--trace-bound",
        "4",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let c = r["coefficients"].as_object().unwrap();
    // the hexagonal lattice: 1, 6 vectors of norm 2, 6 of norm 6, 6 of norm 8
    let vals: Vec<u64> = c.values().map(|v| v.as_u64().unwrap()).collect();
    assert!(vals.contains(&1) && vals.contains(&6), "{c:?}");
    let bad = scratch("bad.json");
    std::fs::write(&bad, "[[1,2],[2,1]]").unwrap();
    assert!(!run(&["theta", "--gram", bad.to_str().unwrap(), "--n", "1", "--trace-bound", "2"]).status.success());
}
