use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn udlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udlab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("udlab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn json_stdout(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn optimize_reference_alpha() {
    let v = json_stdout(&udlab(&["optimize", "--alpha", "5/17"]));
    assert_eq!(v["beta"], "49/197");
    assert_eq!(v["delta"], "37/394");
    assert_eq!(v["value"], "295/197");
    let classes = v["tight_classes"].as_array().unwrap();
    assert_eq!(classes.len(), 6);
    assert!(classes.iter().any(|c| c.as_array().unwrap().len() == 2));
}

#[test]
fn optimize_rejects_alpha_out_of_range() {
    let o = udlab(&["optimize", "--alpha", "3/4"]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "core");
}

#[test]
fn config_error_names_the_field() {
    let d = scratch("badcfg");
    let cfg = d.join("exp.json");
    std::fs::write(
        &cfg,
        r#"{"name": "x", "steps": [{"op": "scan"}, {"op": "count", "in": "a.json", "engine": "fast"}]}"#,
    )
    .unwrap();
    let o = udlab(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "config");
    assert_eq!(e["pointer"], "/steps/1/engine");

    std::fs::write(&cfg, r#"{"name": "x", "steps": [{"op": "gen", "family": "pencil", "kk": 3}]}"#).unwrap();
    let o = udlab(&["run", "--config", cfg.to_str().unwrap()]);
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["pointer"], "/steps/0/kk");
    assert!(e["message"].as_str().unwrap().contains("kk"));
}

#[test]
fn config_runs_steps_in_out_dir() {
    let d = scratch("cfg");
    let cfg = d.join("exp.json");
    std::fs::write(
        &cfg,
        r#"{"name": "e1", "seed": 9, "out_dir": "out", "steps": [
            {"op": "gen", "family": "example1", "b": 1, "out": "e1.json"},
            {"op": "count", "metric": "dstar", "in": "e1.json", "out": "count.json", "check_brute": true}
        ]}"#,
    )
    .unwrap();
    let o = udlab(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fam: Value = serde_json::from_str(&std::fs::read_to_string(d.join("out/e1.json")).unwrap()).unwrap();
    assert_eq!(fam["params"]["seed"], 9);
    let c: Value = serde_json::from_str(&std::fs::read_to_string(d.join("out/count.json")).unwrap()).unwrap();
    assert_eq!(c["unordered_pairs"], c["brute_unordered_pairs"]);
    assert_eq!(c["ordered_pairs"], 2 * c["unordered_pairs"].as_u64().unwrap());
}

#[test]
fn count_grid_matches_brute() {
    let d = scratch("count");
    let fam = d.join("g.json");
    let o = udlab(&["gen", "--family", "grid", "--n", "300", "--den", "3", "--side", "3", "--seed", "4", "--out", fam.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for metric in ["euclid", "dstar"] {
        let v = json_stdout(&udlab(&["count", "--metric", metric, "--in", fam.to_str().unwrap(), "--check-brute"]));
        assert_eq!(v["unordered_pairs"], v["brute_unordered_pairs"]);
        assert_eq!(v["points"], 300);
    }
}

#[test]
fn dual_check_is_clean() {
    let v = json_stdout(&udlab(&["dual-check", "--trials", "100", "--seed", "3"]));
    assert_eq!(v["duality_failures"], 0);
    assert_eq!(v["span6_failures"], 0);
    assert_eq!(v["parity_failures"], 0);
}

#[test]
fn cut_report_columns() {
    let d = scratch("cut");
    let fam = d.join("p.json");
    let csv = d.join("cuts.csv");
    let arcs = d.join("arcs.json");
    assert!(udlab(&["gen", "--family", "pencil", "--k", "5", "--seed", "5", "--out", fam.to_str().unwrap()]).status.success());
    let o = udlab(&[
        "cut", "--in", fam.to_str().unwrap(), "--out", arcs.to_str().unwrap(), "--report", csv.to_str().unwrap(),
        "--rotation-seed", "105",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), "n,B,cut_count,verified\n5,2,13,true\n");
    let a: Value = serde_json::from_str(&std::fs::read_to_string(&arcs).unwrap()).unwrap();
    assert_eq!(a["verified"], true);
}

#[test]
fn slope_from_series_file_and_failure_exit() {
    let d = scratch("slope");
    let s = d.join("s.json");
    std::fs::write(&s, r#"[{"n": 4, "count": 8}, {"n": 9, "count": 27}, {"n": 16, "count": 64}]"#).unwrap();
    let v = json_stdout(&udlab(&["slope", "--in", s.to_str().unwrap()]));
    assert_eq!(v["slope_rounded"], "1.500000000");
    let o = udlab(&["slope", "--in", s.to_str().unwrap(), "--max", "1.4"]);
    assert_eq!(o.status.code(), Some(1));
    let f: Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).lines().next().unwrap()).unwrap();
    assert_eq!(f["failure"]["check"], "slope-max");
}

#[test]
fn bad_thread_count_is_an_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_udlab"))
        .args(["optimize", "--alpha", "0"])
        .env("LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
