use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbosons"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("check {name} missing"))
}

fn column(table: &Value, name: &str) -> usize {
    table["columns"]
        .as_array()
        .unwrap()
        .iter()
        .position(|c| c == name)
        .unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn verify_interior_parameter_passes() {
    let out = run(&["verify", "--family", "gauss-lowering", "--alpha", "0.3", "--dim", "96", "--nmax", "16"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = json(&out);
    for c in r["checks"].as_array().unwrap() {
        assert_ne!(c["status"], "fail", "{c}");
    }
    assert_eq!(r["meta"]["tolerances"]["commutator"].as_f64(), Some(1e-12));
}

#[test]
fn verify_raising_family_passes() {
    let out = run(&["verify", "--family", "gauss-raising", "--beta", "0.3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_outside_disk_is_usage_error() {
    let out = run(&["verify", "--family", "gauss-lowering", "--alpha", "0.6"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("< 1/2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_undeformed_defects_vanish() {
    let out = run(&["verify", "--alpha", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for c in r["checks"].as_array().unwrap() {
        if c["status"] == "pass" {
            assert!(c["observed"].as_f64().unwrap() <= 1e-12, "{c}");
        }
    }
}

#[test]
fn not_applicable_checks_are_listed() {
    let r = json(&run(&["verify", "--alpha", "0.2"]));
    for name in ["coordinate_form", "counterexample"] {
        let c = check(&r, name);
        assert_eq!(c["status"], "not-applicable");
        assert_eq!(c["pass"], false);
        assert!(c["observed"].is_null());
    }
}

#[test]
fn near_boundary_is_flagged() {
    let r = json(&run(&["verify", "--alpha", "0.45", "--nmax", "8"]));
    let warnings = r["meta"]["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("near the disk boundary")));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--alpha", "0.25,0.1", "--nmax", "10"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let sweep = ["sweep", "--grid", "0.1:0.45:0.05"];
    assert_eq!(run(&sweep).stdout, run(&sweep).stdout);
}

#[test]
fn sweep_rows_match_closed_form_and_disk() {
    let out = run(&["sweep", "--family", "gauss-lowering", "--grid", "0.3,0.5,0.55"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let t = &r["tables"]["sweep"];
    let rows = t["rows"].as_array().unwrap();
    let class = column(t, "class");
    let norm = column(t, "norm_sq_trunc");
    assert!((rows[0][norm].as_f64().unwrap() - 1.25).abs() <= 1e-10);
    assert_eq!(rows[0][class], "convergent");
    for row in &rows[1..] {
        assert_eq!(row[class], "divergent");
        assert!(row[norm].is_null());
    }
    assert!(!rows[2][column(t, "blow_up_index")].is_null());
}

#[test]
fn default_sweep_grid_is_convergent() {
    let r = json(&run(&["sweep"]));
    let t = &r["tables"]["sweep"];
    let class = column(t, "class");
    let rows = t["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|row| row[class] == "convergent"));
}

#[test]
fn malformed_grid_is_usage_error() {
    for grid in ["0.1,abc", "0.5:0.1:0.1", "0.1,2.0"] {
        assert_eq!(run(&["sweep", "--grid", grid]).status.code(), Some(2), "{grid}");
    }
}

#[test]
fn sweep_csv_has_header() {
    let out = run(&["sweep", "--grid", "0.1,0.2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("parameter,limiting_ratio,class"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn nogo_quadratic_coefficients() {
    let out = run(&["nogo", "--family", "power-raising", "--power", "2", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let t = &r["tables"]["coefficients"];
    let rows = t["rows"].as_array().unwrap();
    let (index, abs) = (column(t, "index"), column(t, "abs"));
    assert_eq!(rows[1][index], 3);
    assert!((rows[1][abs].as_f64().unwrap() - (2.0f64 / 3.0).sqrt()).abs() <= 1e-12);
    let class = &r["tables"]["classification"]["rows"][0];
    assert_eq!(class[1], "divergent");
}

#[test]
fn nogo_undeformed_kernel_is_vacuum() {
    let r = json(&run(&["nogo", "--power", "2", "--alpha", "0"]));
    assert_eq!(r["tables"]["coefficients"]["rows"].as_array().unwrap().len(), 1);
    assert_eq!(r["tables"]["classification"]["rows"][0][1], "convergent");
}

#[test]
fn nogo_cubic_pattern() {
    let r = json(&run(&["nogo", "--power", "3", "--alpha", "0.2"]));
    let t = &r["tables"]["coefficients"];
    let index = column(t, "index");
    let idx: Vec<u64> = t["rows"].as_array().unwrap()[..3]
        .iter()
        .map(|row| row[index].as_u64().unwrap())
        .collect();
    assert_eq!(idx, vec![0, 4, 8]);
    assert_eq!(r["tables"]["classification"]["rows"][0][1], "divergent");
    assert_eq!(check(&r, "commutator")["status"], "pass");
}

#[test]
fn nogo_power_is_validated() {
    assert_eq!(run(&["nogo", "--power", "1", "--alpha", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["nogo", "--alpha", "0.5"]).status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let path = scratch("merge.conf");
    std::fs::write(&path, "# run\nfamily = gauss-lowering\nalpha = 0.2\nnmax = 8\ntol.commutator = 1e-11\n").unwrap();
    let r = json(&run(&["verify", "--config", path.to_str().unwrap(), "--alpha", "0.25"]));
    let meta = &r["meta"];
    assert_eq!(meta["alpha"][0].as_f64(), Some(0.25));
    assert_eq!(meta["nmax"], 8);
    assert_eq!(meta["tolerances"]["commutator"].as_f64(), Some(1e-11));
    assert_eq!(meta["config"], path.to_str().unwrap());

    std::fs::write(&path, "bogus = 1\n").unwrap();
    assert_eq!(run(&["verify", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unknown_tolerance_and_family_are_usage_errors() {
    assert_eq!(run(&["verify", "--tol", "nonsense=1e-3"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--family", "power-raising"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--dim", "10", "--nmax", "16"]).status.code(), Some(2));
}

#[test]
fn tight_tolerance_fails_with_exit_one() {
    let out = run(&["verify", "--alpha", "0.3", "--nmax", "8", "--tol", "commutator=1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(check(&json(&out), "commutator")["status"], "fail");
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("report.json");
    let out = run(&["verify", "--alpha", "0.1", "--nmax", "6", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["meta"]["command"], "verify");
}

#[test]
fn landau_passes() {
    let out = run(&["landau", "--alpha", "0.3", "--beta", "0.2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = json(&out);
    assert!(check(&r, "counterexample_norm")["observed"].as_f64().unwrap() >= 1.0);
    assert_eq!(run(&["landau", "--alpha", "0.7"]).status.code(), Some(2));
}

#[test]
fn text_format_renders() {
    let out = run(&["verify", "--alpha", "0.2", "--nmax", "6", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
    assert!(text.contains("[omega]"));
}
