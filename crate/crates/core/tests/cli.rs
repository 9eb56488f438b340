use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn hkline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkline")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn strip_timing(mut v: Value) -> Value {
    for r in v["records"].as_array_mut().unwrap() {
        r.as_object_mut().unwrap().remove("wall_time_ms");
    }
    v
}

#[test]
fn passing_suite_exits_zero() {
    let o = hkline(&["verify", "mckay"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS mckay.A1.quiver_dim"));
}

#[test]
fn failing_suite_exits_one() {
    let o = hkline(&["verify", "twistor", "--samples", "3"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("FAIL twistor.fz.fibre"));
    assert!(out.contains("PASS twistor.connection_pair "));
}

#[test]
fn usage_and_config_errors_exit_two() {
    for args in [
        vec!["verify", "--suite", "nope"],
        vec!["verify", "gh", "--centers", ""],
        vec!["verify", "gh", "--centers", "1,0"],
        vec!["verify", "flat", "--order", "3"],
        vec!["verify", "--bogus-flag"],
        vec!["signs", "--diagram", "Q7"],
        vec!["profiles", "gh", "--centers", "", "--dir", "unused"],
    ] {
        let o = hkline(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn config_file_is_read_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# quick run\nsuite = twistor\nsamples = 2\n").unwrap();
    let o = hkline(&["verify", "--config", path.to_str().unwrap(), "--suite", "mckay", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "mckay");
    fs::write(&path, "samples = lots\n").unwrap();
    assert_eq!(code(&hkline(&["verify", "--config", path.to_str().unwrap()])), 2);
}

#[test]
fn signs_for_odd_and_even_cycles() {
    let o = hkline(&["signs", "--diagram", "A4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "NONE (odd cycle)");
    let o = hkline(&["signs", "--diagram", "A3"]);
    let text = stdout(&o);
    let signs: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(signs.len(), 4);
    assert!(signs.iter().all(|s| *s == "+1" || *s == "-1"));
    assert!(signs.windows(2).all(|w| w[0] != w[1]));
}

#[test]
fn json_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = hkline(&["verify", "gh", "--samples", "4", "--seed", "9", "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
    }
    let va: Value = serde_json::from_str(&fs::read_to_string(&a).unwrap()).unwrap();
    let vb: Value = serde_json::from_str(&fs::read_to_string(&b).unwrap()).unwrap();
    assert_eq!(va["schema"], 1);
    assert_eq!(va["seed"], 9);
    assert_eq!(strip_timing(va), strip_timing(vb));
}

#[test]
fn gh_periods_for_three_centers() {
    let o = hkline(&["verify", "gh", "--centers", "0,1,3", "--c", "0", "--samples", "4", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let records = v["records"].as_array().unwrap();
    for id in ["gh.0_1_3.period.0", "gh.0_1_3.period.1", "gh.0_1_3.f_constant.0", "gh.0_1_3.f_constant.1"] {
        let r = records.iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("{id} missing"));
        assert_eq!(r["pass"], true, "{r}");
    }
    assert!(records.iter().all(|r| r["id"] != "gh.0_1_3.f_middle_zero"));
}

#[test]
fn non_integral_level_is_a_failing_record() {
    let o = hkline(&["verify", "quotient", "--c", "0.5", "--samples", "3", "--json"]);
    assert_eq!(code(&o), 1);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = v["records"].as_array().unwrap().iter().find(|r| r["id"] == "quotient.canonical_curvature").unwrap().clone();
    assert_eq!(r["pass"], false);
    assert!(r["residual"].is_null());
    assert!(r["error"].is_string());
}

#[test]
fn profiles_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = hkline(&["profiles", "gh", "--centers", "0,1", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("gh_axis_0_1.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,V,f,phi"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row.len(), 4);
    let o = hkline(&["profiles", "quotient", "--samples", "8", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let scatter = fs::read_to_string(dir.path().join("quotient_gh_scatter.csv")).unwrap();
    assert!(scatter.starts_with("x1,x2,x3,dist_a1,dist_a2,V,V_model\n"));
    for l in scatter.lines().skip(1) {
        let r: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((r[5] - r[6]).abs() < 1e-6 * r[5].abs().max(1.0), "{l}");
    }
}
