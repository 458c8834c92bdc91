use std::path::PathBuf;
use std::process::{Command, Output};

use wres_verifier::{parse_spec, run_suite, CheckKind};

fn write_spec(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("wres-cli-{}-{}.spec", std::process::id(), name));
    std::fs::write(&p, text).unwrap();
    p
}

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn misspelled_value_exits_2_with_position_and_suggestion() {
    let p = write_spec("typo", "family = diracc\n");
    let o = verify(&["--spec", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("line 1, column 10"), "{}", e);
    assert!(e.contains("dirac"), "{}", e);
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_key_exits_2() {
    let p = write_spec("key", "family = dirac\n  chekcs = [cases]\n");
    let o = verify(&["--spec", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("line 2, column 3") && e.contains("`checks`"), "{}", e);
}

#[test]
fn missing_spec_file_exits_2() {
    let o = verify(&["--spec", "/nonexistent/wres.spec"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_only_check_exits_2() {
    let o = verify(&["--only", "cases,bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"));
}

#[test]
fn list_checks_names_every_check() {
    let o = verify(&["--list-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8(o.stdout).unwrap();
    for c in CheckKind::ALL {
        assert!(out.lines().any(|l| l.starts_with(c.name())), "{} missing", c.name());
    }
}

#[test]
fn dirac_suite_exits_0_with_schema() {
    let p = write_spec("dirac", "family = dirac\nchecks = [cases, psi, lichnerowicz, interior, oracle]\noracle_seeds = 3\n");
    let o = verify(&["--spec", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["version"], "wres-verifier/1");
    assert_eq!(v["summary"]["mismatched"], 0);
    assert_eq!(v["spec"]["families"], serde_json::json!(["dirac"]));
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["match"] == true));
}

#[test]
fn signature_interior_mismatch_exits_1() {
    let o = verify(&["--only", "interior"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rec = v["records"].as_array().unwrap().iter().find(|r| r["name"] == "interior/signature").unwrap();
    assert_eq!(rec["match"], false);
    assert!(!rec["flags"].as_array().unwrap().is_empty());
}

#[test]
fn seed_flag_is_deterministic() {
    let args = ["--only", "oracle", "--seed", "7"];
    let p = write_spec("seed", "family = dirac\noracle_seeds = 2\n");
    let mut full = vec!["--spec", p.to_str().unwrap()];
    full.extend(args);
    let a = verify(&full);
    let b = verify(&full);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["spec"]["seed"], 7);
}

#[test]
fn markdown_and_json_agree_on_match_flags() {
    let spec = parse_spec("checks = [cases, psi, interior]\n").unwrap();
    let r = run_suite(&spec);
    let md = r.to_markdown();
    for rec in &r.records {
        let row = md.lines().find(|l| l.starts_with(&format!("| `{}` |", rec.name))).unwrap();
        let cell = if rec.matched { "| yes |" } else { "| NO |" };
        assert!(row.contains(cell), "{}", row);
    }
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    for (rec, j) in r.records.iter().zip(v["records"].as_array().unwrap()) {
        assert_eq!(j["match"], rec.matched);
    }
}

#[test]
fn markdown_format_flag() {
    let o = verify(&["--only", "psi", "--format", "md"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("# Verification report"));
}
