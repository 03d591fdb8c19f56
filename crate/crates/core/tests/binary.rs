use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn charcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charcalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn identities_exit_codes() {
    assert_eq!(charcalc(&["identities", "--max-m", "1"]).status.code(), Some(0));
    let bad = charcalc(&["identities", "--max-m", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--max-m"));
}

#[test]
fn chi_d_table_empty_divisor() {
    let out = charcalc(&["chi-d", "table", "--file", &data("empty_divisor.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("chi_d = 7"));
}

#[test]
fn chi_d_cp_json_is_stable() {
    let args = ["--json", "chi-d", "cp", "--r", "2", "--s", "2", "--d", "1", "--mults", "1,1"];
    let a = charcalc(&args);
    let b = charcalc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["overall"], "pass");
    assert_eq!(report["command"], "chi-d cp");
    let f = report["values"].as_array().unwrap().iter().find(|v| v["name"] == "f'(1)").unwrap();
    assert_eq!(f["value"], "0");
}

#[test]
fn blowup_check_worked_example() {
    let out = charcalc(&["blowup-check", "--file", &data("triangle.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in ["m0 = 3", "chi_d before = 0", "chi_d after = 0", "chi_d(Y, D_Y) = 1", "chi_d(E, D_E) = 1"] {
        assert!(text.contains(line), "missing {line} in {text}");
    }
}

#[test]
fn blowup_check_needs_center() {
    let out = charcalc(&["blowup-check", "--file", &data("empty_divisor.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("center"));
}

#[test]
fn blowup_check_random() {
    let out = charcalc(&["blowup-check", "--random", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("passed = 100/100"));
}

#[test]
fn malformed_input_is_reported() {
    let out = charcalc(&["chi-d", "table", "--file", &data("bad_superset.json")]);
    assert_eq!(out.status.code(), Some(2));
    let missing = charcalc(&["chi-d", "table", "--file", "/nonexistent/pair.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("cannot read"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"d\": 1,\n  \"components\": [\n  oops\n}").unwrap();
    let out = charcalc(&["chi-d", "table", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

#[test]
fn hrr_and_hodge_commands() {
    let out = charcalc(&["hrr", "cp", "--n", "2", "--p", "1", "--twist", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("chi = 0"));

    let out = charcalc(&["hodge", "blowup", "--x", "cp3", "--y", "point", "--codim", "3"]);
    assert!(stdout(&out).contains("betti = (1,0,2,0,2,0,1)"));

    let out = charcalc(&["hodge", "correction", "--diamond", &data("cp1.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("-2 * (log 2pi)/2"));

    let out = charcalc(&["hodge", "bundle", "--base", "cp1", "--fiber-dim", "1"]);
    assert!(stdout(&out).contains("betti = (1,0,2,0,1)"));

    let out = charcalc(&["hodge", "ledger", "--diamond", "quintic"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn out_flag_and_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_charcalc"))
        .env("CHARCALC_THREADS", "2")
        .args(["--json", "--out", path.to_str().unwrap(), "identities", "--max-m", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["checks"].as_array().unwrap().len(), 15);

    let bad = Command::new(env!("CARGO_BIN_EXE_charcalc"))
        .env("CHARCALC_THREADS", "zero")
        .args(["identities", "--max-m", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
