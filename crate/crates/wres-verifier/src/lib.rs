//! Verification suite runner for the `wres-core` engine.
//!
//! A [`SuiteSpec`] selects families and checks; [`run_suite`] evaluates them
//! and returns a [`VerificationReport`] that renders as JSON or Markdown.

pub mod checks;
pub mod oracle;
pub mod report;
pub mod spec;

use wres_core::boundary_engine::expected_psi;
use wres_core::coeff_algebra::Assignment;
use wres_core::lichnerowicz_engine::{
    displayed_integrand, extract_laplace, interior_trace, specialize_n, square_twisted, theorem_rhs, trace_of,
    InteriorSource, LaplaceData, RhsForm,
};
use wres_core::operator_library::Family;
use wres_core::scalar_core::{GaussRational, Sym};

pub use checks::Record;
pub use report::VerificationReport;
pub use spec::{parse_spec, CheckKind, OutputFormat, SpecError, SuiteSpec};

use oracle::{eval_constant, eval_symbol_at, numeric_laplace, xi_point};

pub const SCHEMA_VERSION: &str = "wres-verifier/1";

fn oracle_record(name: String, anchor: &str, agree: u64, seeds: u64) -> Record {
    Record::new(name, anchor, format!("{}/{} seeds agree", agree, seeds), format!("{}/{} seeds agree", seeds, seeds), agree == seeds)
}

fn laplace_agrees(data: &LaplaceData, num: &oracle::NumericLaplace, asg: &Assignment) -> Result<bool, String> {
    let e = eval_constant(&data.e, asg).map_err(|e| e.to_string())?;
    if e != num.as_map() {
        return Ok(false);
    }
    for (w, nw) in data.omega.iter().zip(&num.omega) {
        let m = eval_constant(w, asg).map_err(|e| e.to_string())?;
        let want: std::collections::BTreeMap<_, _> =
            if nw.is_zero() { Default::default() } else { [(wres_core::Mono::one(), nw.clone())].into_iter().collect() };
        if m != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix-substitution checks for one family over `seeds` assignments.
pub fn oracle_records(family: Family, rank: usize, base: u64, seeds: u64) -> Vec<Record> {
    let fam = family.name();
    checks::guarded(&format!("oracle/{}", fam), "random exact matrix substitution", || -> Result<Vec<Record>, String> {
        let cases = checks::cases_of(family)?;
        let psi = checks::psi_of(family)?;
        let psi_want = expected_psi(family);
        let pars = [checks::parametrix_pair(family, false)?, checks::parametrix_pair(family, true)?];
        let lich = |x: wres_core::lichnerowicz_engine::LichError| x.to_string();
        let extracted = extract_laplace(&square_twisted(family).map_err(lich)?).map_err(lich)?;
        let stated = theorem_rhs(family, RhsForm::Statement).map_err(lich)?;
        let source = match family {
            Family::Dirac => InteriorSource::Dirac,
            Family::Signature => InteriorSource::Signature,
        };
        let interior = interior_trace(source).map_err(lich)?;
        let displayed = specialize_n(&trace_of(&displayed_integrand(family).map_err(lich)?).map_err(lich)?, 4);
        let four = GaussRational::int(4);

        let (mut n_cases, mut n_par, mut n_lich, mut n_int, mut n_disp) = (0u64, 0u64, 0u64, 0u64, 0u64);
        for i in 0..seeds {
            let asg = oracle::assignment(rank, base, i);
            let sub = |t: &wres_core::coeff_algebra::TraceExpr| t.substitute(&asg).map_err(|e| e.to_string());
            let mut ok = sub(&psi)? == sub(&psi_want)?;
            for r in &cases {
                ok &= sub(&r.value)? == sub(&r.expected)?;
            }
            n_cases += ok as u64;

            let x = xi_point(i);
            let at = |s| eval_symbol_at(s, &asg, &x).map_err(|e| e.to_string());
            let mut ok = true;
            for (a, b) in &pars {
                ok &= at(a)? == at(b)?;
            }
            n_par += ok as u64;

            let num = numeric_laplace(family, &asg).map_err(|e| e.to_string())?;
            n_lich += (laplace_agrees(&extracted, &num, &asg)? && laplace_agrees(&stated, &num, &asg)?) as u64;

            let nt = num.interior_trace();
            n_int += (sub(&interior)?.subst(Sym::N, &four) == nt) as u64;
            n_disp += (sub(&displayed)? == nt) as u64;
        }
        let mut int_rec = oracle_record(format!("oracle/{}/interior", fam), "interior integrand against matrix-level E", n_int, seeds);
        if n_disp != seeds {
            int_rec = int_rec.flag(format!("displayed integrand agrees with the matrix-level value at {}/{} seeds", n_disp, seeds));
        }
        Ok(vec![
            oracle_record(format!("oracle/{}/cases", fam), "boundary case values and their sum", n_cases, seeds),
            oracle_record(format!("oracle/{}/parametrix", fam), "order -2 parametrix symbol against its closed form", n_par, seeds),
            oracle_record(
                format!("oracle/{}/lichnerowicz", fam),
                "connection and endomorphism rebuilt from plain matrices",
                n_lich,
                seeds,
            ),
            int_rec,
        ])
    })
}

/// Runs every selected check. Engine failures become failed records.
pub fn run_suite(spec: &SuiteSpec) -> VerificationReport {
    let mut records = Vec::new();
    let has = |c: CheckKind| spec.checks.contains(&c);
    for &f in &spec.families {
        if has(CheckKind::Identities) {
            records.extend(checks::identities(f));
        }
        if has(CheckKind::Parametrix) {
            records.extend(checks::parametrix_records(f));
        }
        if has(CheckKind::Cases) {
            records.extend(checks::case_records(f));
        }
        if has(CheckKind::Psi) {
            records.extend(checks::psi_records(f));
        }
        if has(CheckKind::Lichnerowicz) {
            records.extend(checks::lichnerowicz_records(f));
        }
        if has(CheckKind::Interior) {
            records.extend(checks::interior_records(f));
        }
        if has(CheckKind::Oracle) {
            records.extend(oracle_records(f, spec.oracle_rank, spec.seed, spec.oracle_seeds));
        }
    }
    if has(CheckKind::Convention) && spec.families.contains(&Family::Signature) {
        records.extend(checks::convention_records());
    }
    VerificationReport::new(spec, records)
}
