use wres_core::boundary_engine::{evaluate_all, pi_omega, psi_total, CaseId};
use wres_core::coeff_algebra::{Assignment, FAtom};
use wres_core::operator_library::Family;
use wres_core::{GaussRational, Mono, ScalarExpr, Sym};

fn value(asg: &Assignment, a: FAtom) -> GaussRational {
    asg.value(&a).unwrap().trace()
}

#[test]
fn dirac_total_against_matrix_traces() {
    let psi = psi_total(Family::Dirac).unwrap();
    for seed in 0..5 {
        let asg = Assignment::random(3, seed);
        let t = &value(&asg, FAtom::Phi(4)) + &value(&asg, FAtom::PhiStar(4));
        assert_eq!(psi.substitute(&asg).unwrap(), ScalarExpr::term(t, pi_omega()), "seed {}", seed);
    }
}

#[test]
fn signature_total_vanishes() {
    let asg = Assignment::random(2, 11);
    assert!(psi_total(Family::Signature).unwrap().substitute(&asg).unwrap().is_zero());
}

#[test]
fn hp0_cases_scale_with_rank() {
    let hp0 = pi_omega().mul(&Mono::sym(Sym::Hp0));
    for (family, c) in [(Family::Dirac, GaussRational::frac(3, 8)), (Family::Signature, GaussRational::frac(3, 2))] {
        let all = evaluate_all(family).unwrap();
        let get = |id| all.iter().find(|r| r.case.id == id).unwrap().value.clone();
        for k in 1..=3usize {
            let asg = Assignment::random(k, 0);
            let want = ScalarExpr::term(&c * &GaussRational::int(k as i64), hp0.clone());
            assert_eq!(get(CaseId::AIII).substitute(&asg).unwrap(), want);
            assert_eq!(get(CaseId::AII).substitute(&asg).unwrap(), want.scale(&GaussRational::int(-1)));
            assert!(get(CaseId::AI).substitute(&asg).unwrap().is_zero());
        }
    }
}
