//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported as FAIL but do not fail the
//! run; every other FAIL exits nonzero.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;
use wres_core::operator_library::Family;
use wres_verifier::checks::projection_records;

const KNOWN_RED: &[(u32, &str)] = &[
    (6, "signature integrand: the derived (W*-W)^2 coefficient is -n/16, the displayed one +n/16"),
    (9, "the displayed signature integrand disagrees with the matrix-level value, as in criterion 6"),
];

struct Report {
    records: Vec<Value>,
}

impl Report {
    fn select(&self, pred: impl Fn(&str) -> bool) -> Vec<&Value> {
        self.records.iter().filter(|r| pred(r["name"].as_str().unwrap())).collect()
    }

    fn get(&self, name: &str) -> Option<&Value> {
        self.records.iter().find(|r| r["name"] == name)
    }

    /// All named records exist and match; the rest of the prefix group too.
    fn all_match(&self, prefixes: &[&str], required: &[&str]) -> (bool, String) {
        let recs = self.select(|n| prefixes.iter().any(|p| n.starts_with(p)));
        let missing: Vec<&&str> = required.iter().filter(|n| self.get(n).is_none()).collect();
        let bad: Vec<&str> = recs.iter().filter(|r| r["match"] != true).map(|r| r["name"].as_str().unwrap()).collect();
        let ok = !recs.is_empty() && missing.is_empty() && bad.is_empty();
        let detail = if ok {
            format!("{} records", recs.len())
        } else if !missing.is_empty() {
            format!("missing {:?}", missing)
        } else {
            format!("mismatched {:?}", bad)
        };
        (ok, detail)
    }
}

fn run_default() -> (Duration, String, i32) {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_verify")).output().expect("run verify");
    (t.elapsed(), String::from_utf8(out.stdout).expect("utf-8"), out.status.code().unwrap_or(-1))
}

fn main() -> ExitCode {
    let (elapsed, json, code) = run_default();
    let parsed: Value = serde_json::from_str(&json).expect("report is JSON");
    let report = Report { records: parsed["records"].as_array().expect("records").clone() };
    let mut results: Vec<(u32, bool, String)> = Vec::new();

    let t = Instant::now();
    let proj: Vec<_> = [Family::Dirac, Family::Signature].into_iter().flat_map(projection_records).collect();
    let proj_time = t.elapsed();
    let proj_ok = proj.len() == 6 && proj.iter().all(|r| r.matched);
    results.push((
        1,
        proj_ok && proj_time < Duration::from_secs(1),
        format!("pi+ projections, {} records in {:.0?}", proj.len(), proj_time),
    ));

    let dirac_cases = ["a(I)", "a(II)", "a(III)", "b", "c"].map(|c| format!("cases/dirac/{}", c));
    let req: Vec<&str> = dirac_cases.iter().map(|s| s.as_str()).chain(["psi/dirac"]).collect();
    let (ok, d) = report.all_match(&["cases/dirac/", "psi/dirac"], &req);
    results.push((2, ok, format!("Dirac boundary cases and total, {}", d)));

    let sig_cases = ["a(I)", "a(II)", "a(III)", "b", "c"].map(|c| format!("cases/signature/{}", c));
    let req: Vec<&str> = sig_cases.iter().map(|s| s.as_str()).chain(["psi/signature"]).collect();
    let (ok, d) = report.all_match(&["cases/signature/", "psi/signature"], &req);
    let psi_zero = report.get("psi/signature").map(|r| r["computed"] == "0").unwrap_or(false);
    results.push((3, ok && psi_zero, format!("signature boundary cases, total 0, {}", d)));

    let (ok, d) = report.all_match(
        &["parametrix/"],
        &["parametrix/dirac/sigma0-geometric", "parametrix/signature/sigma0-geometric", "parametrix/signature/adjoint/sigma-2"],
    );
    results.push((4, ok, format!("parametrix symbols and geometric sigma0, {}", d)));

    let (ok, d) = report.all_match(
        &["lichnerowicz/"],
        &[
            "lichnerowicz/dirac/statement",
            "lichnerowicz/signature/statement",
            "lichnerowicz/dirac/negative-control",
            "lichnerowicz/signature/negative-control",
        ],
    );
    results.push((5, ok, format!("zero residuals, nonzero negative controls, {}", d)));

    let (ok, d) = report.all_match(&["interior/"], &["interior/dirac", "interior/signature", "interior/dirac/curvature-term"]);
    results.push((6, ok, format!("interior integrands, {}", d)));

    let (ok, d) = report.all_match(
        &["identities/dirac/trace/", "identities/signature/trace/"],
        &["identities/signature/trace/sum-b4m", "identities/signature/trace/tr[c(dxn)p0]"],
    );
    results.push((7, ok, format!("trace identities, {}", d)));

    let (ok, d) = report.all_match(
        &["identities/dirac/cancellation/", "identities/signature/cancellation/"],
        &["identities/dirac/cancellation/a(II)+a(III)", "identities/signature/cancellation/hp0-part(b+c)"],
    );
    results.push((8, ok, format!("cancellations in both families, {}", d)));

    let (ok, d) = report.all_match(&["oracle/"], &["oracle/dirac/cases", "oracle/signature/lichnerowicz"]);
    let displayed_ok = report
        .get("oracle/signature/interior")
        .map(|r| r["flags"].as_array().map(|f| f.is_empty()).unwrap_or(true))
        .unwrap_or(false);
    let seeds_ok = parsed["spec"]["oracle_seeds"] == 100 && parsed["spec"]["oracle_rank"] == 2;
    results.push((
        9,
        ok && displayed_ok && seeds_ok,
        format!("engine against matrices at rank 2, 100 seeds, {}; displayed signature integrand agrees: {}", d, displayed_ok),
    ));

    let written = report.get("convention/as-written").map(|r| r["match"] == true).unwrap_or(false);
    let aligned = report.get("convention/aligned-reading-differs").map(|r| r["match"] == true).unwrap_or(false);
    let (ok10, _) = report.all_match(&["convention/"], &["convention/trace-E", "convention/omega-zero"]);
    results.push((
        10,
        written && aligned && ok10,
        "one reading gives 2pi^2 tr[(5/6)s + w^2]; the sign-aligned reading differs (flagged warning)".to_string(),
    ));

    let (_, json2, _) = run_default();
    let fast = elapsed < Duration::from_secs(60);
    let want_code = if parsed["summary"]["mismatched"] == 0 { 0 } else { 1 };
    results.push((
        11,
        fast && json == json2 && code == want_code,
        format!("default suite {:.1?}, identical JSON on rerun: {}, exit code {}", elapsed, json == json2, code),
    ));

    let mut unexpected = false;
    for (n, ok, detail) in &results {
        let red = KNOWN_RED.iter().find(|(k, _)| k == n);
        let status = match (ok, red) {
            (true, _) => "PASS".to_string(),
            (false, Some((_, why))) => format!("FAIL (known red: {})", why),
            (false, None) => {
                unexpected = true;
                "FAIL".to_string()
            }
        };
        println!("criterion {:>2}: {} - {}", n, status, detail);
        if *ok && red.is_some() {
            println!("criterion {:>2}: note - listed as known red but passed", n);
        }
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
